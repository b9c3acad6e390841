use std::fmt;

use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rat::Rat;
use crate::rmat::RMat;
use crate::unifactor;
use crate::upoly::UPoly;

/// Dense matrix over Q[x], row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct PMat {
    rows: usize,
    cols: usize,
    e: Vec<UPoly>,
}

impl PMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        PMat {
            rows,
            cols,
            e: vec![UPoly::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = PMat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, UPoly::one());
        }
        m
    }

    pub fn from_entries(rows: usize, cols: usize, e: Vec<UPoly>) -> Result<Self> {
        if e.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "expected {} entries, got {}",
                rows * cols,
                e.len()
            )));
        }
        Ok(PMat { rows, cols, e })
    }

    pub fn from_rows(rows: Vec<Vec<UPoly>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged row lengths".into()));
        }
        Ok(PMat {
            rows: r,
            cols: c,
            e: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_scalar(m: &RMat) -> Self {
        let mut out = PMat::zeros(m.rows(), m.cols());
        for r in 0..m.rows() {
            for c in 0..m.cols() {
                if !m.at(r, c).is_zero() {
                    out.set(r, c, UPoly::constant(m.at(r, c).clone()));
                }
            }
        }
        out
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &UPoly {
        &self.e[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: UPoly) {
        self.e[r * self.cols + c] = v;
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.e.iter().all(UPoly::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && *self == PMat::identity(self.rows)
    }

    /// True if every entry has degree at most 1.
    pub fn is_linear(&self) -> bool {
        self.e.iter().all(UPoly::is_linear)
    }

    pub fn max_deg(&self) -> usize {
        self.e.iter().map(UPoly::deg_or0).max().unwrap_or(0)
    }

    pub fn transpose(&self) -> PMat {
        let mut t = PMat::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.at(r, c).clone());
            }
        }
        t
    }

    pub fn mat_mul(&self, rhs: &PMat) -> PMat {
        assert_eq!(self.cols, rhs.rows, "inner dimension mismatch");
        let mut out = PMat::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(r, k);
                if a.is_zero() {
                    continue;
                }
                let a_is_one = a.is_one();
                for c in 0..rhs.cols {
                    let b = rhs.at(k, c);
                    if b.is_zero() {
                        continue;
                    }
                    let prod = if a_is_one {
                        b.clone()
                    } else if b.is_one() {
                        a.clone()
                    } else {
                        a * b
                    };
                    let t = &out.e[r * rhs.cols + c] + &prod;
                    out.e[r * rhs.cols + c] = t;
                }
            }
        }
        out
    }

    pub fn add(&self, rhs: &PMat) -> PMat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        PMat {
            rows: self.rows,
            cols: self.cols,
            e: self.e.iter().zip(&rhs.e).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, rhs: &PMat) -> PMat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        PMat {
            rows: self.rows,
            cols: self.cols,
            e: self.e.iter().zip(&rhs.e).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn neg(&self) -> PMat {
        PMat {
            rows: self.rows,
            cols: self.cols,
            e: self.e.iter().map(|a| -a).collect(),
        }
    }

    pub fn scale(&self, c: &Rat) -> PMat {
        PMat {
            rows: self.rows,
            cols: self.cols,
            e: self.e.iter().map(|a| a.scale(c)).collect(),
        }
    }

    /// Entry-wise substitution x -> x + a.
    pub fn shift_x(&self, a: &Rat) -> PMat {
        PMat {
            rows: self.rows,
            cols: self.cols,
            e: self.e.iter().map(|p| p.shift(a)).collect(),
        }
    }

    /// Coefficient matrix of x^i.
    pub fn coeff_matrix(&self, i: usize) -> RMat {
        let mut m = RMat::zeros(self.rows, self.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                m.set(r, c, self.at(r, c).coeff(i));
            }
        }
        m
    }

    pub fn eval(&self, a: &Rat) -> RMat {
        let mut m = RMat::zeros(self.rows, self.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                m.set(r, c, self.at(r, c).eval(a));
            }
        }
        m
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> PMat {
        assert!(r0 + rows <= self.rows && c0 + cols <= self.cols);
        let mut m = PMat::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m.set(r, c, self.at(r0 + r, c0 + c).clone());
            }
        }
        m
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &PMat) {
        assert!(r0 + b.rows <= self.rows && c0 + b.cols <= self.cols);
        for r in 0..b.rows {
            for c in 0..b.cols {
                self.set(r0 + r, c0 + c, b.at(r, c).clone());
            }
        }
    }

    pub fn direct_sum(&self, rhs: &PMat) -> PMat {
        let mut m = PMat::zeros(self.rows + rhs.rows, self.cols + rhs.cols);
        m.set_block(0, 0, self);
        m.set_block(self.rows, self.cols, rhs);
        m
    }

    /// Embed a square block at the given diagonal offset of an n x n identity.
    pub fn block_embed(&self, n: usize, offset: usize) -> Result<PMat> {
        if !self.is_square() {
            return Err(Error::NonSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        if offset + self.rows > n {
            return Err(Error::IndexOutOfRange);
        }
        let mut m = PMat::identity(n);
        for r in 0..self.rows {
            for c in 0..self.cols {
                m.set(offset + r, offset + c, self.at(r, c).clone());
            }
        }
        Ok(m)
    }

    /// Pad with an identity block: self directly summed with I_k.
    pub fn pad_identity(&self, k: usize) -> PMat {
        self.direct_sum(&PMat::identity(k))
    }

    pub fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.cols {
            self.e.swap(i * self.cols + c, j * self.cols + c);
        }
    }

    pub fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for r in 0..self.rows {
            self.e.swap(r * self.cols + i, r * self.cols + j);
        }
    }

    /// col_dst += g * col_src.
    pub fn add_scaled_col(&mut self, src: usize, dst: usize, g: &UPoly) {
        assert_ne!(src, dst);
        for r in 0..self.rows {
            let t = &(self.at(r, src) * g) + self.at(r, dst);
            self.set(r, dst, t);
        }
    }

    /// row_dst += g * row_src.
    pub fn add_scaled_row(&mut self, src: usize, dst: usize, g: &UPoly) {
        assert_ne!(src, dst);
        for c in 0..self.cols {
            let t = &(self.at(src, c) * g) + self.at(dst, c);
            self.set(dst, c, t);
        }
    }

    pub fn scale_col(&mut self, i: usize, c: &Rat) {
        assert!(!c.is_zero());
        for r in 0..self.rows {
            let t = self.at(r, i).scale(c);
            self.set(r, i, t);
        }
    }

    pub fn scale_row(&mut self, i: usize, c: &Rat) {
        assert!(!c.is_zero());
        for j in 0..self.cols {
            let t = self.at(i, j).scale(c);
            self.set(i, j, t);
        }
    }

    /// Reorder columns: new column j is old column perm[j].
    pub fn permute_cols(&mut self, perm: &[usize]) {
        assert_eq!(perm.len(), self.cols);
        let old = self.clone();
        for j in 0..self.cols {
            for r in 0..self.rows {
                self.set(r, j, old.at(r, perm[j]).clone());
            }
        }
    }

    /// Reorder rows: new row i is old row perm[i].
    pub fn permute_rows(&mut self, perm: &[usize]) {
        assert_eq!(perm.len(), self.rows);
        let old = self.clone();
        for i in 0..self.rows {
            for c in 0..self.cols {
                self.set(i, c, old.at(perm[i], c).clone());
            }
        }
    }

    /// A degree bound on det: sum over rows of the max entry degree.
    fn det_degree_bound(&self) -> usize {
        (0..self.rows)
            .map(|r| (0..self.cols).map(|c| self.at(r, c).deg_or0()).max().unwrap_or(0))
            .sum()
    }

    /// Exact determinant by evaluation at enough integer points plus
    /// interpolation; each scalar determinant is fraction-free Bareiss.
    pub fn det(&self) -> Result<UPoly> {
        if !self.is_square() {
            return Err(Error::NonSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let bound = self.det_degree_bound();
        let mut pts = Vec::with_capacity(bound + 1);
        for i in 0..=bound as i64 {
            let x = Rat::from_int(i);
            let d = self.eval(&x).det()?;
            pts.push((x, d));
        }
        UPoly::interp(&pts)
    }

    /// Rank over the fraction field Q(x), certified by taking the maximum
    /// scalar rank over min(rows,cols)*maxdeg + 1 distinct points.
    pub fn rank_fraction_field(&self) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        let cap = self.rows.min(self.cols);
        let n = cap * self.max_deg() + 1;
        let mut best = 0;
        for i in 0..n as i64 {
            best = best.max(self.eval(&Rat::from_int(i)).rank());
            if best == cap {
                break; // maximum possible rank reached
            }
        }
        best
    }

    /// A unit of the matrix ring: square with nonzero constant determinant.
    pub fn is_unit(&self) -> Result<bool> {
        let d = self.det()?;
        Ok(d.is_constant() && !d.is_zero())
    }

    /// Full: square with nonzero determinant.
    pub fn is_full(&self) -> Result<bool> {
        Ok(!self.det()?.is_zero())
    }

    /// Atom: full non-unit whose determinant is irreducible over Q. Over the
    /// PID Q[x] an irreducible determinant certifies atomicity: any split
    /// M = A*B forces det(A)*det(B) = det(M), so one side is a unit.
    pub fn is_atom(&self) -> Result<bool> {
        let d = self.det()?;
        if d.is_zero() {
            return Err(Error::Singular);
        }
        if d.is_constant() {
            return Ok(false);
        }
        unifactor::is_irreducible(&d)
    }

    /// Exact inverse of a unit: adjugate divided by the constant determinant.
    pub fn invert_unit(&self) -> Result<PMat> {
        let d = self.det()?;
        if !d.is_constant() || d.is_zero() {
            return Err(Error::NotAUnit);
        }
        let dinv = d.coeff(0).recip()?;
        let n = self.rows;
        let mut adj = PMat::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                let minor_rows: Vec<usize> = (0..n).filter(|&i| i != r).collect();
                let minor_cols: Vec<usize> = (0..n).filter(|&j| j != c).collect();
                let mut minor = PMat::zeros(n - 1, n - 1);
                for (i, &mr) in minor_rows.iter().enumerate() {
                    for (j, &mc) in minor_cols.iter().enumerate() {
                        minor.set(i, j, self.at(mr, mc).clone());
                    }
                }
                let mut cof = minor.det()?;
                if (r + c) % 2 == 1 {
                    cof = -&cof;
                }
                // adjugate transposes the cofactor grid
                adj.set(c, r, cof.scale(&dinv));
            }
        }
        Ok(adj)
    }

    pub fn encoding_size(&self) -> u64 {
        let maxb = self.e.iter().map(UPoly::encoding_size).max().unwrap_or(0);
        (self.rows * self.cols) as u64 * maxb
    }
}

impl fmt::Debug for PMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "PMat {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self.at(r, c).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Accumulator for unimodular column operations: applies each operation to a
/// target matrix while maintaining the accumulated transform N and its exact
/// inverse, so N stays a unit by construction.
pub struct ColOps {
    pub acc: PMat,
    pub acc_inv: PMat,
}

impl ColOps {
    pub fn new(n: usize) -> Self {
        ColOps {
            acc: PMat::identity(n),
            acc_inv: PMat::identity(n),
        }
    }

    /// col_dst += g * col_src on the target and on the accumulator.
    pub fn add_scaled(&mut self, target: &mut PMat, src: usize, dst: usize, g: &UPoly) {
        if g.is_zero() {
            return;
        }
        target.add_scaled_col(src, dst, g);
        self.acc.add_scaled_col(src, dst, g);
        let neg = -g;
        self.acc_inv.add_scaled_row(dst, src, &neg);
    }

    pub fn swap(&mut self, target: &mut PMat, i: usize, j: usize) {
        target.swap_cols(i, j);
        self.acc.swap_cols(i, j);
        self.acc_inv.swap_rows(i, j);
    }

    pub fn scale(&mut self, target: &mut PMat, i: usize, c: &Rat) {
        target.scale_col(i, c);
        self.acc.scale_col(i, c);
        self.acc_inv.scale_row(i, &c.recip().expect("nonzero scale"));
    }

    pub fn permute(&mut self, target: &mut PMat, perm: &[usize]) {
        target.permute_cols(perm);
        self.acc.permute_cols(perm);
        // (P^-1 * acc_inv) row i is the old row perm[i]
        self.acc_inv.permute_rows(perm);
    }
}

/// Row-operation accumulator over scalar matrices (left transforms).
pub struct ScalarRowOps {
    pub acc: RMat,
    pub acc_inv: RMat,
}

impl ScalarRowOps {
    pub fn new(n: usize) -> Self {
        ScalarRowOps {
            acc: RMat::identity(n),
            acc_inv: RMat::identity(n),
        }
    }

    /// row_dst += c * row_src on a polynomial target.
    pub fn add_scaled(&mut self, target: &mut PMat, src: usize, dst: usize, c: &Rat) {
        if c.is_zero() {
            return;
        }
        let g = UPoly::constant(c.clone());
        target.add_scaled_row(src, dst, &g);
        for j in 0..self.acc.cols() {
            let v = self.acc.at(dst, j) + &(self.acc.at(src, j) * c);
            self.acc.set(dst, j, v);
        }
        let nc = -c;
        for i in 0..self.acc_inv.rows() {
            let v = self.acc_inv.at(i, src) + &(self.acc_inv.at(i, dst) * &nc);
            self.acc_inv.set(i, src, v);
        }
    }

    pub fn scale(&mut self, target: &mut PMat, i: usize, c: &Rat) {
        target.scale_row(i, c);
        for j in 0..self.acc.cols() {
            let v = self.acc.at(i, j) * c;
            self.acc.set(i, j, v);
        }
        let inv = c.recip().expect("nonzero scale");
        for r in 0..self.acc_inv.rows() {
            let v = self.acc_inv.at(r, i) * &inv;
            self.acc_inv.set(r, i, v);
        }
    }

    /// Reorder rows of the target: new row i is old row perm[i].
    pub fn permute(&mut self, target: &mut PMat, perm: &[usize]) {
        target.permute_rows(perm);
        let old = self.acc.clone();
        for i in 0..perm.len() {
            for j in 0..self.acc.cols() {
                self.acc.set(i, j, old.at(perm[i], j).clone());
            }
        }
        // (acc_inv * P^-1) column c is the old column perm[c]
        let old_inv = self.acc_inv.clone();
        for c in 0..perm.len() {
            for i in 0..self.acc_inv.rows() {
                self.acc_inv.set(i, c, old_inv.at(i, perm[c]).clone());
            }
        }
    }
}

#[derive(Serialize, Deserialize)]
struct PMatDoc {
    ring: String,
    rows: usize,
    cols: usize,
    entries: Vec<Vec<UPoly>>,
}

impl Serialize for PMat {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let entries = (0..self.rows)
            .map(|r| (0..self.cols).map(|c| self.at(r, c).clone()).collect())
            .collect();
        PMatDoc {
            ring: "Q[x]".to_string(),
            rows: self.rows,
            cols: self.cols,
            entries,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for PMat {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let doc = PMatDoc::deserialize(deserializer)?;
        if doc.ring != "Q[x]" {
            return Err(de::Error::custom(format!("unsupported ring {:?}", doc.ring)));
        }
        if doc.entries.len() != doc.rows || doc.entries.iter().any(|r| r.len() != doc.cols) {
            return Err(de::Error::custom("entry grid does not match rows x cols"));
        }
        PMat::from_rows(doc.entries).map_err(de::Error::custom)
    }
}
