use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rat::Rat;
use crate::upoly::UPoly;

/// Dense matrix of exact rationals, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct RMat {
    rows: usize,
    cols: usize,
    e: Vec<Rat>,
}

impl RMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RMat {
            rows,
            cols,
            e: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = RMat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rat::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged row lengths".into()));
        }
        Ok(RMat {
            rows: r,
            cols: c,
            e: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_ints(rows: &[&[i64]]) -> Self {
        RMat::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| Rat::from_int(v)).collect())
                .collect(),
        )
        .expect("rectangular literal")
    }

    /// Companion matrix of a monic polynomial: ones on the subdiagonal and
    /// the negated coefficients in the last column.
    pub fn companion(f: &UPoly) -> Result<Self> {
        let k = f.degree().ok_or(Error::ZeroInput)?;
        if k == 0 {
            return Err(Error::DimensionMismatch("companion of a constant".into()));
        }
        if !f.leading().unwrap().is_one() {
            return Err(Error::InvariantViolation("companion requires a monic polynomial".into()));
        }
        let mut m = RMat::zeros(k, k);
        for i in 1..k {
            m.set(i, i - 1, Rat::one());
        }
        for i in 0..k {
            m.set(i, k - 1, -&f.coeff(i));
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &Rat {
        &self.e[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rat) {
        self.e[r * self.cols + c] = v;
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.e.iter().all(Rat::is_zero)
    }

    pub fn transpose(&self) -> RMat {
        let mut t = RMat::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.at(r, c).clone());
            }
        }
        t
    }

    pub fn mul(&self, rhs: &RMat) -> RMat {
        assert_eq!(self.cols, rhs.rows, "inner dimension mismatch");
        let mut out = RMat::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..rhs.cols {
                    let b = rhs.at(k, c);
                    if b.is_zero() {
                        continue;
                    }
                    let t = &out.e[r * rhs.cols + c] + &(a * b);
                    out.e[r * rhs.cols + c] = t;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|r| {
                let mut acc = Rat::zero();
                for c in 0..self.cols {
                    let a = self.at(r, c);
                    if !a.is_zero() && !v[c].is_zero() {
                        acc = &acc + &(a * &v[c]);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, rhs: &RMat) -> RMat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        RMat {
            rows: self.rows,
            cols: self.cols,
            e: self.e.iter().zip(&rhs.e).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, rhs: &RMat) -> RMat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        RMat {
            rows: self.rows,
            cols: self.cols,
            e: self.e.iter().zip(&rhs.e).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn neg(&self) -> RMat {
        RMat {
            rows: self.rows,
            cols: self.cols,
            e: self.e.iter().map(|a| -a).collect(),
        }
    }

    pub fn scale(&self, c: &Rat) -> RMat {
        RMat {
            rows: self.rows,
            cols: self.cols,
            e: self.e.iter().map(|a| a * c).collect(),
        }
    }

    pub fn row(&self, r: usize) -> Vec<Rat> {
        (0..self.cols).map(|c| self.at(r, c).clone()).collect()
    }

    pub fn col(&self, c: usize) -> Vec<Rat> {
        (0..self.rows).map(|r| self.at(r, c).clone()).collect()
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> RMat {
        let mut m = RMat::zeros(rows.len(), cols.len());
        for (i, &r) in rows.iter().enumerate() {
            for (j, &c) in cols.iter().enumerate() {
                m.set(i, j, self.at(r, c).clone());
            }
        }
        m
    }

    pub fn from_cols(cols: &[Vec<Rat>]) -> Result<Self> {
        let r = cols.first().map_or(0, Vec::len);
        if cols.iter().any(|c| c.len() != r) {
            return Err(Error::DimensionMismatch("ragged column lengths".into()));
        }
        let mut m = RMat::zeros(r, cols.len());
        for (j, col) in cols.iter().enumerate() {
            for (i, v) in col.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        Ok(m)
    }

    pub fn hstack(&self, rhs: &RMat) -> RMat {
        assert_eq!(self.rows, rhs.rows);
        let mut m = RMat::zeros(self.rows, self.cols + rhs.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                m.set(r, c, self.at(r, c).clone());
            }
            for c in 0..rhs.cols {
                m.set(r, self.cols + c, rhs.at(r, c).clone());
            }
        }
        m
    }

    /// Reduced row echelon form with leftmost pivots; returns the RREF and
    /// the pivot column indices.
    pub fn rref(&self) -> (RMat, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| !m.at(i, c).is_zero()) else {
                continue;
            };
            if pr != r {
                for j in 0..m.cols {
                    m.e.swap(r * m.cols + j, pr * m.cols + j);
                }
            }
            let inv = m.at(r, c).recip().expect("pivot is nonzero");
            for j in 0..m.cols {
                let v = m.at(r, j) * &inv;
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r || m.at(i, c).is_zero() {
                    continue;
                }
                let f = m.at(i, c).clone();
                for j in 0..m.cols {
                    let v = m.at(i, j) - &(m.at(r, j) * &f);
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Kernel basis vectors (one per free column), deterministic order.
    pub fn kernel_basis(&self) -> Vec<Vec<Rat>> {
        let (rref, pivots) = self.rref();
        let mut basis = Vec::new();
        let is_pivot: Vec<bool> = {
            let mut v = vec![false; self.cols];
            for &p in &pivots {
                v[p] = true;
            }
            v
        };
        for free in 0..self.cols {
            if is_pivot[free] {
                continue;
            }
            let mut v = vec![Rat::zero(); self.cols];
            v[free] = Rat::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -rref.at(r, free);
            }
            basis.push(v);
        }
        basis
    }

    /// Row indices forming a maximal independent set (pivot rows of the
    /// column-space computation), ascending.
    pub fn independent_rows(&self) -> Vec<usize> {
        self.transpose().rref().1
    }

    /// One solution of self * x = b, if any.
    pub fn solve(&self, b: &[Rat]) -> Option<Vec<Rat>> {
        assert_eq!(self.rows, b.len());
        let mut aug = RMat::zeros(self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in 0..self.cols {
                aug.set(r, c, self.at(r, c).clone());
            }
            aug.set(r, self.cols, b[r].clone());
        }
        let (rref, pivots) = aug.rref();
        if pivots.contains(&self.cols) {
            return None; // inconsistent
        }
        let mut x = vec![Rat::zero(); self.cols];
        for (r, &p) in pivots.iter().enumerate() {
            x[p] = rref.at(r, self.cols).clone();
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<RMat> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let aug = self.hstack(&RMat::identity(n));
        let (rref, pivots) = aug.rref();
        if pivots.len() != n || pivots.iter().enumerate().any(|(i, &p)| i != p) {
            return None;
        }
        let cols: Vec<usize> = (n..2 * n).collect();
        let rows: Vec<usize> = (0..n).collect();
        Some(rref.submatrix(&rows, &cols))
    }

    /// Exact determinant via fraction-free Bareiss elimination after
    /// clearing denominators row by row.
    pub fn det(&self) -> Result<Rat> {
        if !self.is_square() {
            return Err(Error::NonSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(Rat::one());
        }
        // Clear denominators: row r scaled by l_r, det gets divided by prod l_r.
        let mut m: Vec<Vec<BigInt>> = Vec::with_capacity(n);
        let mut scale = Rat::one();
        for r in 0..n {
            let mut l = BigInt::one();
            for c in 0..n {
                l = l.lcm(self.at(r, c).denom());
            }
            scale = &scale * &Rat::from_bigint(l.clone());
            m.push(
                (0..n)
                    .map(|c| {
                        let e = self.at(r, c);
                        e.numer() * (&l / e.denom())
                    })
                    .collect(),
            );
        }
        // Bareiss.
        let mut sign = 1i64;
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m[k][k].is_zero() {
                let Some(sw) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                    return Ok(Rat::zero());
                };
                m.swap(k, sw);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                    m[i][j] = &num / &prev;
                }
                m[i][k] = BigInt::zero();
            }
            prev = m[k][k].clone();
        }
        let det_int = m[n - 1][n - 1].clone() * BigInt::from(sign);
        Ok(&Rat::from_bigint(det_int) / &scale)
    }

    /// Horner evaluation of a polynomial at a square matrix.
    pub fn poly_apply(f: &UPoly, a: &RMat) -> RMat {
        assert!(a.is_square());
        let n = a.rows;
        let mut acc = RMat::zeros(n, n);
        for c in f.coeffs().iter().rev() {
            acc = acc.mul(a);
            for i in 0..n {
                let v = acc.at(i, i) + c;
                acc.set(i, i, v);
            }
        }
        acc
    }

    pub fn pow(&self, mut k: u32) -> RMat {
        assert!(self.is_square());
        let mut base = self.clone();
        let mut acc = RMat::identity(self.rows);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn encoding_size(&self) -> u64 {
        let maxb = self.e.iter().map(Rat::encoding_size).max().unwrap_or(0);
        (self.rows * self.cols) as u64 * maxb
    }
}

impl fmt::Debug for RMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RMat {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self.at(r, c).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn det_and_inverse() {
        let m = RMat::from_ints(&[&[1, 2], &[3, 4]]);
        assert_eq!(m.det().unwrap(), Rat::from_int(-2));
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), RMat::identity(2));
        let s = RMat::from_ints(&[&[1, 2], &[2, 4]]);
        assert_eq!(s.det().unwrap(), Rat::zero());
        assert!(s.inverse().is_none());
    }

    #[test]
    fn kernel_and_rank() {
        let m = RMat::from_ints(&[&[1, 2, 3], &[2, 4, 6]]);
        assert_eq!(m.rank(), 1);
        let ker = m.kernel_basis();
        assert_eq!(ker.len(), 2);
        for v in &ker {
            assert!(m.mul_vec(v).iter().all(Rat::is_zero));
        }
    }

    #[test]
    fn companion_charpoly_relation() {
        // companion of x^2 + 1 squares to -I
        let f = UPoly::from_ints(&[1, 0, 1]);
        let c = RMat::companion(&f).unwrap();
        assert_eq!(c.pow(2), RMat::identity(2).neg());
    }

    #[test]
    fn solve_system() {
        let m = RMat::from_ints(&[&[2, 1], &[1, 3]]);
        let b = vec![Rat::from_int(5), Rat::from_int(10)];
        let x = m.solve(&b).unwrap();
        assert_eq!(m.mul_vec(&x), b);
        let inc = RMat::from_ints(&[&[1, 1], &[1, 1]]);
        assert!(inc.solve(&[Rat::from_int(0), Rat::from_int(1)]).is_none());
    }

    #[test]
    fn independent_rows_picks_pivots() {
        let m = RMat::from_ints(&[&[0, 0], &[1, 2], &[2, 4], &[0, 1]]);
        assert_eq!(m.independent_rows(), vec![1, 3]);
    }
}
