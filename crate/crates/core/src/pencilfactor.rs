//! Factorization of a full non-unit linear pencil into linear atoms:
//! monic reduction, a constant shift making the scalar part invertible,
//! primary decomposition and good bases for A - xI, and peeling of the
//! block lower triangular form into atom factors.

use crate::error::{Error, Result};
use crate::pencil::Pencil;
use crate::pmat::PMat;
use crate::rat::Rat;
use crate::rmat::RMat;
use crate::trivialize::t_normal_form;
use crate::unifactor;
use crate::upoly::UPoly;

/// Which side of L the polynomial unit ends up on in the monic reduction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Monic reduction certificate. Left form: U·L·S = W ⊕ I. Right form:
/// S·L·U = W ⊕ I. U is a polynomial unit, S an invertible scalar matrix,
/// W a full monic pencil.
#[derive(Clone, Debug)]
pub struct MonicOutcome {
    pub side: Side,
    pub u: PMat,
    pub u_inv: PMat,
    pub s: RMat,
    pub s_inv: RMat,
    pub w: Pencil,
    pub padding: usize,
}

/// One primary component of a scalar matrix A: the subspace
/// V = ker f(A)^e with χ restricted to it equal to f^d.
#[derive(Clone, Debug)]
pub struct PrimaryComponent {
    pub f: UPoly,
    pub d_i: u32,
    pub e_i: u32,
    pub basis: RMat,
    pub block: RMat,
}

/// The cyclic sets added at one layer of the good-basis tower
/// U_j = ker f(B)^j.
#[derive(Clone, Debug)]
pub struct LayerBasis {
    pub layer: usize,
    pub cyclic_sets: Vec<Vec<Vec<Rat>>>,
    pub nu: usize,
}

/// Complete factorization of a pencil: linear atoms plus the polynomial
/// unit that a non-monic reduction leaves on the right.
/// product(atoms) · trailing_unit = L exactly.
#[derive(Clone, Debug)]
pub struct PencilFactorization {
    pub atoms: Vec<PMat>,
    pub trailing_unit: PMat,
    pub trailing_unit_inv: PMat,
}

impl PencilFactorization {
    pub fn reconstruct(&self) -> PMat {
        let mut acc = self.atoms[0].clone();
        for a in &self.atoms[1..] {
            acc = acc.mat_mul(a);
        }
        acc.mat_mul(&self.trailing_unit)
    }
}

/// Incremental span tracker over Q^n using reduced echelon rows.
struct Span {
    n: usize,
    rows: Vec<(usize, Vec<Rat>)>,
}

impl Span {
    fn new(n: usize) -> Self {
        Span { n, rows: Vec::new() }
    }

    fn reduce(&self, v: &[Rat]) -> Vec<Rat> {
        let mut w = v.to_vec();
        for (piv, row) in &self.rows {
            let c = w[*piv].clone();
            if c.is_zero() {
                continue;
            }
            for i in 0..self.n {
                let t = &w[i] - &(&c * &row[i]);
                w[i] = t;
            }
        }
        w
    }

    fn contains(&self, v: &[Rat]) -> bool {
        self.reduce(v).iter().all(Rat::is_zero)
    }

    /// Add a vector; returns false if it was already in the span.
    fn insert(&mut self, v: &[Rat]) -> bool {
        let w = self.reduce(v);
        let Some(piv) = w.iter().position(|c| !c.is_zero()) else {
            return false;
        };
        let inv = w[piv].recip().expect("nonzero pivot");
        let norm: Vec<Rat> = w.iter().map(|c| c * &inv).collect();
        self.rows.push((piv, norm));
        true
    }

    fn dim(&self) -> usize {
        self.rows.len()
    }
}

/// Characteristic polynomial det(xI - A) and minimal polynomial of A, the
/// latter as the lcm of per-basis-vector Krylov annihilators.
pub fn char_min_poly(a: &RMat) -> Result<(UPoly, UPoly)> {
    if !a.is_square() {
        return Err(Error::NonSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let d = a.rows();
    // xI - A as a polynomial matrix.
    let mut xi = PMat::from_scalar(&a.neg());
    for i in 0..d {
        xi.set(i, i, &UPoly::x() + xi.at(i, i));
    }
    let chi = xi.det()?;

    let mut m = UPoly::one();
    for j in 0..d {
        let mut span = Span::new(d);
        let mut krylov: Vec<Vec<Rat>> = Vec::new();
        let mut v: Vec<Rat> = (0..d)
            .map(|i| if i == j { Rat::one() } else { Rat::zero() })
            .collect();
        loop {
            if !span.insert(&v) {
                break;
            }
            krylov.push(v.clone());
            v = a.mul_vec(&v);
        }
        // v is dependent on the Krylov vectors collected so far.
        let t = krylov.len();
        let basis = RMat::from_cols(&krylov)?;
        let sol = basis
            .solve(&v)
            .ok_or_else(|| Error::InvariantViolation("Krylov solve failed".into()))?;
        let mut coeffs: Vec<Rat> = sol.iter().map(|c| -c).collect();
        coeffs.push(Rat::one());
        debug_assert_eq!(coeffs.len(), t + 1);
        let g = UPoly::new(coeffs);
        // lcm(m, g) = m * g / gcd(m, g)
        let gcd = m.gcd(&g)?;
        m = (&m * &g).divmod(&gcd)?.0.monic();
    }
    Ok((chi, m))
}

/// Primary decomposition of a scalar square matrix: bases of the subspaces
/// V_i = ker f_i(A)^{e_i}, one per irreducible factor of χ_A, together with
/// the diagonal blocks of A in the concatenated basis.
pub fn primary_decompose(a: &RMat) -> Result<Vec<PrimaryComponent>> {
    let d = a.rows();
    let (chi, m) = char_min_poly(a)?;
    let chi_fac = unifactor::factor_rational(&chi)?;
    let mut comps: Vec<(UPoly, u32, u32, RMat)> = Vec::new();
    let mut t_cols: Vec<Vec<Rat>> = Vec::new();
    for (f, di) in &chi_fac.factors {
        // e_i = multiplicity of f in the minimal polynomial.
        let mut ei = 0u32;
        let mut rest = m.clone();
        loop {
            let (q, r) = rest.divmod(f)?;
            if !r.is_zero() {
                break;
            }
            ei += 1;
            rest = q;
        }
        if ei == 0 || ei > *di {
            return Err(Error::InvariantViolation(
                "minimal polynomial support mismatch".into(),
            ));
        }
        let fa = RMat::poly_apply(f, a).pow(ei);
        let kernel = fa.kernel_basis();
        if kernel.len() != (*di as usize) * f.deg_or0() {
            return Err(Error::InvariantViolation(
                "primary component dimension mismatch".into(),
            ));
        }
        let basis = RMat::from_cols(&kernel)?;
        t_cols.extend(kernel);
        comps.push((f.clone(), *di, ei, basis));
    }
    if t_cols.len() != d {
        return Err(Error::InvariantViolation(
            "primary components do not fill the space".into(),
        ));
    }
    let t = RMat::from_cols(&t_cols)?;
    let t_inv = t
        .inverse()
        .ok_or_else(|| Error::InvariantViolation("primary basis not invertible".into()))?;
    let bd = t_inv.mul(a).mul(&t);
    let mut out = Vec::new();
    let mut off = 0usize;
    for (f, di, ei, basis) in comps {
        let n = (di as usize) * f.deg_or0();
        let idx: Vec<usize> = (off..off + n).collect();
        let block = bd.submatrix(&idx, &idx);
        // Off-diagonal blocks of this band must vanish.
        for r in 0..d {
            for c in off..off + n {
                if (r < off || r >= off + n) && !bd.at(r, c).is_zero() {
                    return Err(Error::InvariantViolation(
                        "primary decomposition is not block diagonal".into(),
                    ));
                }
            }
        }
        out.push(PrimaryComponent {
            f,
            d_i: di,
            e_i: ei,
            basis,
            block,
        });
        off += n;
    }
    Ok(out)
}

/// Good-basis computation for a matrix B with χ_B = f^ℓ and m_B = f^e:
/// nested kernels U_j = ker f(B)^j filled layer by layer with cyclic sets
/// {u, Bu, ..., B^(k-1)u}. Layers are returned in ascending order.
pub fn good_basis(b: &RMat, f: &UPoly, e: u32) -> Result<Vec<LayerBasis>> {
    let n = b.rows();
    let k = f.degree().ok_or(Error::ZeroInput)?;
    let fb = RMat::poly_apply(f, b);
    // Nested bases c_j of the tower; each extends the previous one.
    let mut chain: Vec<Vec<Vec<Rat>>> = Vec::new();
    let mut span = Span::new(n);
    let mut nested: Vec<Vec<Rat>> = Vec::new();
    for j in 1..=e {
        let ker = fb.pow(j).kernel_basis();
        for v in ker {
            if span.insert(&v) {
                nested.push(v);
            }
        }
        chain.push(nested.clone());
        if (j as usize) < e as usize && span.dim() == n {
            return Err(Error::InvariantViolation(
                "tower saturated before reaching the minimal exponent".into(),
            ));
        }
    }
    if span.dim() != n {
        return Err(Error::InvariantViolation(
            "tower does not exhaust the space".into(),
        ));
    }

    let mut layers = Vec::new();
    let mut good_span = Span::new(n);
    let mut prev_dim = 0usize;
    for j in 1..=e as usize {
        let cj = &chain[j - 1];
        let uj_dim = cj.len();
        // Spanning set to measure against: everything from lower layers.
        let mut layer_span = Span::new(n);
        for v in &chain[..j - 1].last().map(|c| c.clone()).unwrap_or_default() {
            layer_span.insert(v);
        }
        let mut sets: Vec<Vec<Vec<Rat>>> = Vec::new();
        for u in cj {
            if layer_span.dim() == uj_dim {
                break;
            }
            if layer_span.contains(u) {
                continue;
            }
            let mut set = Vec::with_capacity(k);
            let mut w = u.clone();
            for _ in 0..k {
                if !layer_span.insert(&w) {
                    return Err(Error::InvariantViolation(
                        "cyclic set vectors are not independent".into(),
                    ));
                }
                if !good_span.insert(&w) {
                    return Err(Error::InvariantViolation(
                        "good basis vectors are not independent".into(),
                    ));
                }
                set.push(w.clone());
                w = b.mul_vec(&w);
            }
            sets.push(set);
        }
        let nu = uj_dim - prev_dim;
        if nu == 0 || nu % k != 0 || sets.len() != nu / k {
            return Err(Error::InvariantViolation(
                "layer dimension is not a multiple of deg f".into(),
            ));
        }
        layers.push(LayerBasis {
            layer: j,
            cyclic_sets: sets,
            nu,
        });
        prev_dim = uj_dim;
    }
    Ok(layers)
}

/// Split a block lower triangular linear matrix into linear atom factors
/// using [[D,0],[E,Y]] = [[D,0],[E,I]] · (I ⊕ Y).
pub fn peel_factor(x: &PMat, block_sizes: &[usize]) -> Result<Vec<PMat>> {
    if !x.is_square() {
        return Err(Error::NonSquare {
            rows: x.rows(),
            cols: x.cols(),
        });
    }
    if !x.is_linear() {
        return Err(Error::NotLinear);
    }
    let n = x.rows();
    if block_sizes.iter().sum::<usize>() != n || block_sizes.is_empty() {
        return Err(Error::DimensionMismatch(
            "block sizes do not sum to the dimension".into(),
        ));
    }
    // Verify block lower triangular shape and irreducible diagonal blocks.
    let mut offs = Vec::with_capacity(block_sizes.len());
    let mut off = 0usize;
    for &s in block_sizes {
        offs.push(off);
        off += s;
    }
    for (t, (&o, &s)) in offs.iter().zip(block_sizes).enumerate() {
        for r in o..o + s {
            for c in o + s..n {
                if !x.at(r, c).is_zero() {
                    return Err(Error::InvariantViolation(
                        "matrix is not block lower triangular".into(),
                    ));
                }
            }
        }
        let det = x.block(o, o, s, s).det()?;
        if !unifactor::is_irreducible(&det)? {
            return Err(Error::InvariantViolation(format!(
                "diagonal block {t} has reducible determinant"
            )));
        }
    }
    let mut atoms = Vec::with_capacity(block_sizes.len());
    for (t, (&o, &s)) in offs.iter().zip(block_sizes).enumerate() {
        let mut atom = PMat::identity(n);
        atom.set_block(o, o, &x.block(o, o, s, s));
        if t + 1 < block_sizes.len() {
            // carry the subdiagonal part below this block
            atom.set_block(o + s, o, &x.block(o + s, o, n - o - s, s));
        }
        atoms.push(atom);
    }
    // The construction above eagerly attaches each block's column strip, so
    // the product telescopes: check it exactly.
    let mut prod = atoms[0].clone();
    for a in &atoms[1..] {
        prod = prod.mat_mul(a);
    }
    if &prod != x {
        return Err(Error::InvariantViolation(
            "peel factors do not reconstruct the input".into(),
        ));
    }
    Ok(atoms)
}

/// Find the smallest shift i in 0..=d with det(A0 + i·A1) nonzero and
/// rewrite L(x+i) = (A - xI)·(-A1) with A = -(A0 + i·A1)·A1⁻¹.
/// Returns (i, A, post_unit = -A1).
pub fn shift_to_invertible(l: &Pencil) -> Result<(i64, RMat, RMat)> {
    let a1_inv = l.a1.inverse().ok_or(Error::Singular)?;
    let d = l.dim() as i64;
    for i in 0..=d {
        let shifted = l.a0.add(&l.a1.scale(&Rat::from_int(i)));
        if !shifted.det()?.is_zero() {
            let a = shifted.mul(&a1_inv).neg();
            return Ok((i, a, l.a1.neg()));
        }
    }
    Err(Error::InvariantViolation(
        "no invertible shift among d+1 candidates".into(),
    ))
}

/// Factor A - xI into linear atoms with exact product reconstruction.
pub fn factor_char_pencil(a: &RMat) -> Result<Vec<PMat>> {
    let d = a.rows();
    let comps = primary_decompose(a)?;
    // Global basis: primary bases refined by good bases per component.
    let mut cols: Vec<Vec<Rat>> = Vec::new();
    let mut block_sizes: Vec<usize> = Vec::new();
    for comp in &comps {
        let k = comp.f.deg_or0();
        let layers = good_basis(&comp.block, &comp.f, comp.e_i)?;
        // Descending layer order keeps the representation block lower
        // triangular with companion diagonal blocks.
        for layer in layers.iter().rev() {
            for set in &layer.cyclic_sets {
                for v in set {
                    // map coordinates back through the primary basis
                    cols.push(comp.basis.mul_vec(v));
                }
                block_sizes.push(k);
            }
        }
    }
    if cols.len() != d {
        return Err(Error::InvariantViolation(
            "assembled basis has wrong dimension".into(),
        ));
    }
    let r = RMat::from_cols(&cols)?;
    let r_inv = r
        .inverse()
        .ok_or_else(|| Error::InvariantViolation("assembled basis not invertible".into()))?;
    let c = r_inv.mul(a).mul(&r);
    // Companion diagonal blocks, checked literally.
    {
        let mut off = 0usize;
        let mut comp_iter = comps.iter().flat_map(|comp| {
            let blocks = (comp.d_i as usize) * comp.f.deg_or0() / comp.f.deg_or0();
            std::iter::repeat(comp.f.clone()).take(blocks)
        });
        for &s in &block_sizes {
            let f = comp_iter.next().ok_or_else(|| {
                Error::InvariantViolation("block bookkeeping out of sync".into())
            })?;
            let idx: Vec<usize> = (off..off + s).collect();
            if c.submatrix(&idx, &idx) != RMat::companion(&f.monic())? {
                return Err(Error::InvariantViolation(
                    "diagonal block is not the companion matrix".into(),
                ));
            }
            off += s;
        }
    }
    // C - xI as a polynomial matrix.
    let mut cx = PMat::from_scalar(&c);
    for i in 0..d {
        cx.set(i, i, cx.at(i, i) - &UPoly::x());
    }
    let atoms = peel_factor(&cx, &block_sizes)?;
    // A - xI = R · (C - xI) · R⁻¹; absorb the scalar conjugators.
    let rp = PMat::from_scalar(&r);
    let rp_inv = PMat::from_scalar(&r_inv);
    let mut out = atoms;
    let first = rp.mat_mul(&out[0]);
    out[0] = first;
    let last = out.last().unwrap().mat_mul(&rp_inv);
    *out.last_mut().unwrap() = last;
    Ok(out)
}

/// Core of the monic reduction: scalar row transforms S and a polynomial
/// column unit R with S·Z·R = W ⊕ I_e, W monic. Z must be linear, square
/// and full.
fn monic_core(z: &PMat) -> Result<(RMat, RMat, PMat, PMat, Pencil, usize)> {
    let d = z.rows();
    let tn = t_normal_form(z)?;
    if !tn.j1.is_empty() {
        return Err(Error::Singular);
    }
    let e = tn.j2.len();
    if e == 0 {
        return Err(Error::AlreadyMonic);
    }
    let m = tn.j3.len();
    if m == 0 {
        return Err(Error::UnitInput);
    }
    // Column permutation: non-scalar columns first, scalar columns last.
    let perm: Vec<usize> = tn.j3.iter().chain(tn.j2.iter()).copied().collect();
    let mut pc = PMat::identity(d);
    pc.permute_cols(&perm);
    let pc_inv = pc.transpose();
    let mut cur = tn.d.clone();
    cur.permute_cols(&perm);

    // Row permutation: rows carrying an invertible submatrix of the scalar
    // block go to the bottom.
    let a_block = cur.block(0, m, d, e).coeff_matrix(0);
    let bottom = a_block.independent_rows();
    if bottom.len() != e {
        return Err(Error::InvariantViolation(
            "scalar block lost column rank".into(),
        ));
    }
    let top: Vec<usize> = (0..d).filter(|r| !bottom.contains(r)).collect();
    let rowperm: Vec<usize> = top.iter().chain(bottom.iter()).copied().collect();
    // P_r: new row i = old row rowperm[i].
    let mut pr = RMat::identity(d);
    {
        let src = pr.clone();
        for (i, &oi) in rowperm.iter().enumerate() {
            for c in 0..d {
                pr.set(i, c, src.at(oi, c).clone());
            }
        }
    }
    cur.permute_rows(&rowperm);

    // Column operations kill the bottom-left block using the invertible
    // scalar block A2.
    let a2 = cur.block(d - e, m, e, e).coeff_matrix(0);
    let a2_inv = a2.inverse().ok_or_else(|| {
        Error::InvariantViolation("bottom scalar block not invertible".into())
    })?;
    let b2 = cur.block(d - e, 0, e, m);
    let x0 = a2_inv.mul(&b2.coeff_matrix(0));
    let x1 = a2_inv.mul(&b2.coeff_matrix(1));
    let mut nmat = PMat::identity(d);
    let mut nmat_inv = PMat::identity(d);
    for i in 0..e {
        for j in 0..m {
            let g = UPoly::new(vec![x0.at(i, j).clone(), x1.at(i, j).clone()]);
            if !g.is_zero() {
                nmat.set(m + i, j, -&g);
                nmat_inv.set(m + i, j, g);
            }
        }
    }
    cur = cur.mat_mul(&nmat);

    // Scalar row operations clear the top-right block, then scale the
    // bottom block to the identity.
    let a1_blk = cur.block(0, m, d - e, e).coeff_matrix(0);
    let y = a1_blk.mul(&a2_inv);
    let mut s_clear = RMat::identity(d);
    let mut s_clear_inv = RMat::identity(d);
    for r in 0..d - e {
        for i in 0..e {
            s_clear.set(r, d - e + i, -y.at(r, i));
            s_clear_inv.set(r, d - e + i, y.at(r, i).clone());
        }
    }
    let mut s_scale = RMat::identity(d);
    let mut s_scale_inv = RMat::identity(d);
    for r in 0..e {
        for c in 0..e {
            s_scale.set(d - e + r, d - e + c, a2_inv.at(r, c).clone());
            s_scale_inv.set(d - e + r, d - e + c, a2.at(r, c).clone());
        }
    }
    let s_total = s_scale.mul(&s_clear).mul(&pr);
    let s_total_inv = pr.transpose().mul(&s_clear_inv).mul(&s_scale_inv);
    cur = PMat::from_scalar(&s_scale.mul(&s_clear)).mat_mul(&cur);

    // cur must now be W ⊕ I_e with W monic.
    let w_block = cur.block(0, 0, m, m);
    for r in 0..d {
        for c in 0..d {
            let expect_id = r >= m || c >= m;
            if expect_id {
                let want = if r == c { UPoly::one() } else { UPoly::zero() };
                if cur.at(r, c) != &want {
                    return Err(Error::InvariantViolation(
                        "reduction did not reach W ⊕ I".into(),
                    ));
                }
            }
        }
    }
    let w = Pencil::from_pmat(&w_block)?;
    if !w.is_monic() {
        return Err(Error::InvariantViolation("reduced pencil is not monic".into()));
    }
    let r_total = tn.m.mat_mul(&pc).mat_mul(&nmat);
    let r_total_inv = nmat_inv.mat_mul(&pc_inv).mat_mul(&tn.m_inv);
    // Exactness check of the full identity.
    let lhs = PMat::from_scalar(&s_total).mat_mul(z).mat_mul(&r_total);
    if lhs != cur {
        return Err(Error::InvariantViolation(
            "monic reduction transform mismatch".into(),
        ));
    }
    Ok((s_total, s_total_inv, r_total, r_total_inv, w, e))
}

/// Monic reduction of a full non-monic pencil. Left side gives
/// U·L·S = W ⊕ I, right side gives S·L·U = W ⊕ I.
pub fn monic_reduce(l: &Pencil, side: Side) -> Result<MonicOutcome> {
    if l.is_monic() {
        return Err(Error::AlreadyMonic);
    }
    match side {
        Side::Right => {
            let (s, s_inv, r, r_inv, w, e) = monic_core(&l.to_pmat())?;
            Ok(MonicOutcome {
                side,
                u: r,
                u_inv: r_inv,
                s,
                s_inv,
                w,
                padding: e,
            })
        }
        Side::Left => {
            let (s, s_inv, r, r_inv, w, e) = monic_core(&l.to_pmat().transpose())?;
            let wt = Pencil::new(w.a0.transpose(), w.a1.transpose())?;
            Ok(MonicOutcome {
                side,
                u: r.transpose(),
                u_inv: r_inv.transpose(),
                s: s.transpose(),
                s_inv: s_inv.transpose(),
                w: wt,
                padding: e,
            })
        }
    }
}

/// Factor a monic pencil into linear atoms with exact product equal to the
/// pencil itself (no trailing unit).
fn factor_monic(l: &Pencil) -> Result<Vec<PMat>> {
    let (i, a, post) = shift_to_invertible(l)?;
    let atoms = factor_char_pencil(&a)?;
    let shift = Rat::from_int(-i);
    let mut out: Vec<PMat> = atoms.iter().map(|g| g.shift_x(&shift)).collect();
    // L(x) = (A - (x - i)I)(-A1): fold the scalar unit into the last atom.
    let post_p = PMat::from_scalar(&post);
    let last = out.last().unwrap().mat_mul(&post_p);
    *out.last_mut().unwrap() = last;
    Ok(out)
}

/// Complete factorization of a full non-unit pencil into linear atoms and
/// a trailing polynomial unit.
pub fn factor_pencil(l: &Pencil) -> Result<PencilFactorization> {
    let det = l.det()?;
    if det.is_zero() {
        return Err(Error::Singular);
    }
    if det.is_constant() {
        return Err(Error::UnitInput);
    }
    let d = l.dim();
    if l.is_monic() {
        let atoms = factor_monic(l)?;
        return Ok(PencilFactorization {
            atoms,
            trailing_unit: PMat::identity(d),
            trailing_unit_inv: PMat::identity(d),
        });
    }
    // Right form: S·L·U = W ⊕ I, so L = S⁻¹ · (W ⊕ I) · U⁻¹.
    let mo = monic_reduce(l, Side::Right)?;
    let pad = mo.padding;
    let watoms = factor_monic(&mo.w)?;
    let mut atoms: Vec<PMat> = watoms.iter().map(|g| g.pad_identity(pad)).collect();
    let first = PMat::from_scalar(&mo.s_inv).mat_mul(&atoms[0]);
    atoms[0] = first;
    Ok(PencilFactorization {
        atoms,
        trailing_unit: mo.u_inv,
        trailing_unit_inv: mo.u,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rm(rows: &[&[i64]]) -> RMat {
        RMat::from_ints(rows)
    }

    fn up(c: &[i64]) -> UPoly {
        UPoly::from_ints(c)
    }

    #[test]
    fn char_min_poly_examples() {
        let (chi, m) = char_min_poly(&rm(&[&[1, 1], &[0, 1]])).unwrap();
        assert_eq!(chi, up(&[1, -2, 1]));
        assert_eq!(m, up(&[1, -2, 1]));

        let (chi, m) = char_min_poly(&RMat::identity(2)).unwrap();
        assert_eq!(chi, up(&[1, -2, 1]));
        assert_eq!(m, up(&[-1, 1]));

        let (chi, m) = char_min_poly(&rm(&[&[0, 1], &[-1, 0]])).unwrap();
        assert_eq!(chi, up(&[1, 0, 1]));
        assert_eq!(m, up(&[1, 0, 1]));
    }

    #[test]
    fn primary_decompose_examples() {
        let comps = primary_decompose(&rm(&[&[1, 0], &[0, 2]])).unwrap();
        assert_eq!(comps.len(), 2);
        // factors sort lexicographically on coefficients: x-2 before x-1
        assert_eq!(comps[0].f, up(&[-2, 1]));
        assert_eq!(comps[1].f, up(&[-1, 1]));
        assert_eq!(comps[0].block, rm(&[&[2]]));
        assert_eq!(comps[1].block, rm(&[&[1]]));

        let comps = primary_decompose(&rm(&[&[1, 1], &[0, 1]])).unwrap();
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[0].d_i, 2);
        assert_eq!(comps[0].e_i, 2);

        let comps = primary_decompose(&rm(&[&[0, 1], &[-1, 0]])).unwrap();
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[0].f, up(&[1, 0, 1]));
    }

    #[test]
    fn good_basis_examples() {
        // Jordan block: two layers of one 1-dim cyclic set each.
        let layers = good_basis(&rm(&[&[1, 1], &[0, 1]]), &up(&[-1, 1]), 2).unwrap();
        assert_eq!(layers.len(), 2);
        assert_eq!(layers[0].nu, 1);
        assert_eq!(layers[1].nu, 1);

        // Identity: one layer with two singleton cyclic sets.
        let layers = good_basis(&RMat::identity(2), &up(&[-1, 1]), 1).unwrap();
        assert_eq!(layers.len(), 1);
        assert_eq!(layers[0].cyclic_sets.len(), 2);

        // Companion of x^2+1: one cyclic set of size 2.
        let b = RMat::companion(&up(&[1, 0, 1])).unwrap();
        let layers = good_basis(&b, &up(&[1, 0, 1]), 1).unwrap();
        assert_eq!(layers.len(), 1);
        assert_eq!(layers[0].cyclic_sets.len(), 1);
        assert_eq!(layers[0].cyclic_sets[0].len(), 2);
    }

    #[test]
    fn peel_factor_examples() {
        let x = PMat::from_rows(vec![
            vec![up(&[1, -1]), up(&[0])],
            vec![up(&[1]), up(&[1, -1])],
        ])
        .unwrap();
        let atoms = peel_factor(&x, &[1, 1]).unwrap();
        assert_eq!(atoms.len(), 2);
        assert_eq!(
            atoms[0],
            PMat::from_rows(vec![vec![up(&[1, -1]), up(&[0])], vec![up(&[1]), up(&[1])]])
                .unwrap()
        );
        assert_eq!(
            atoms[1],
            PMat::from_rows(vec![vec![up(&[1]), up(&[0])], vec![up(&[0]), up(&[1, -1])]])
                .unwrap()
        );

        // Single block: unchanged.
        let single = PMat::from_rows(vec![vec![up(&[2, 1])]]).unwrap();
        assert_eq!(peel_factor(&single, &[1]).unwrap(), vec![single.clone()]);

        // Block diagonal.
        let bd = PMat::from_rows(vec![
            vec![up(&[1, -1]), up(&[0])],
            vec![up(&[0]), up(&[2, -1])],
        ])
        .unwrap();
        let atoms = peel_factor(&bd, &[1, 1]).unwrap();
        let prod = atoms[0].mat_mul(&atoms[1]);
        assert_eq!(prod, bd);
    }

    #[test]
    fn shift_examples() {
        // L = -xI + diag(1,2)
        let l = Pencil::new(rm(&[&[1, 0], &[0, 2]]), RMat::identity(2).neg()).unwrap();
        let (i, a, post) = shift_to_invertible(&l).unwrap();
        assert_eq!(i, 0);
        assert_eq!(a, rm(&[&[1, 0], &[0, 2]]));
        assert_eq!(post, RMat::identity(2));

        // L = Ix: needs shift i = 1.
        let l = Pencil::new(RMat::zeros(2, 2), RMat::identity(2)).unwrap();
        let (i, _, _) = shift_to_invertible(&l).unwrap();
        assert_eq!(i, 1);

        // 1x1: x - 3.
        let l = Pencil::new(rm(&[&[-3]]), rm(&[&[1]])).unwrap();
        let (i, a, _) = shift_to_invertible(&l).unwrap();
        assert_eq!(i, 0);
        assert_eq!(a, rm(&[&[3]]));
    }

    fn check_pencil_factorization(l: &Pencil, expected_atoms: usize) {
        let fac = factor_pencil(l).unwrap();
        assert_eq!(fac.atoms.len(), expected_atoms);
        assert_eq!(fac.reconstruct(), l.to_pmat());
        for atom in &fac.atoms {
            assert!(atom.is_linear());
            assert!(atom.is_atom().unwrap());
        }
        assert_eq!(
            fac.trailing_unit.mat_mul(&fac.trailing_unit_inv),
            PMat::identity(l.dim())
        );
        // Atom determinants multiply to det(L) up to the unit's constant.
        let det_l = l.det().unwrap();
        let mut prod = UPoly::one();
        for atom in &fac.atoms {
            prod = &prod * &atom.det().unwrap();
        }
        prod = &prod * &fac.trailing_unit.det().unwrap();
        assert_eq!(prod, det_l);
    }

    #[test]
    fn factor_pencil_diag() {
        // L = -xI + diag(2,3): two atoms with determinants ±(x-2), ±(x-3).
        let l = Pencil::new(rm(&[&[2, 0], &[0, 3]]), RMat::identity(2).neg()).unwrap();
        check_pencil_factorization(&l, 2);
        let fac = factor_pencil(&l).unwrap();
        let dets: Vec<UPoly> = fac.atoms.iter().map(|a| a.det().unwrap()).collect();
        for d in &dets {
            let f = unifactor::factor_rational(d).unwrap();
            assert_eq!(f.factors.len(), 1);
        }
    }

    #[test]
    fn factor_pencil_companion() {
        // companion(x^2+1) - xI: a single atom.
        let c = RMat::companion(&up(&[1, 0, 1])).unwrap();
        let l = Pencil::new(c, RMat::identity(2).neg()).unwrap();
        check_pencil_factorization(&l, 1);
    }

    #[test]
    fn factor_pencil_jordan() {
        // [[1,1],[0,1]] - xI: two atoms with det ±(x-1).
        let l = Pencil::new(rm(&[&[1, 1], &[0, 1]]), RMat::identity(2).neg()).unwrap();
        check_pencil_factorization(&l, 2);
    }

    #[test]
    fn monic_reduce_examples() {
        // L = diag(x, 1): non-monic, reduces to W = [x] with padding 1.
        let l = Pencil::new(rm(&[&[0, 0], &[0, 1]]), rm(&[&[1, 0], &[0, 0]])).unwrap();
        for side in [Side::Left, Side::Right] {
            let mo = monic_reduce(&l, side).unwrap();
            assert_eq!(mo.padding, 1);
            assert_eq!(mo.w.dim(), 1);
            assert!(mo.w.is_monic());
            let lp = l.to_pmat();
            let target = mo.w.to_pmat().pad_identity(mo.padding);
            let got = match side {
                Side::Left => mo
                    .u
                    .mat_mul(&lp)
                    .mat_mul(&PMat::from_scalar(&mo.s)),
                Side::Right => PMat::from_scalar(&mo.s).mat_mul(&lp).mat_mul(&mo.u),
            };
            assert_eq!(got, target);
        }

        // Monic input: error.
        let l = Pencil::new(RMat::zeros(2, 2), RMat::identity(2)).unwrap();
        assert!(matches!(
            monic_reduce(&l, Side::Left),
            Err(Error::AlreadyMonic)
        ));

        // [[x,1],[0,1]]: W = [x], padding 1.
        let l = Pencil::new(rm(&[&[0, 1], &[0, 1]]), rm(&[&[1, 0], &[0, 0]])).unwrap();
        let mo = monic_reduce(&l, Side::Right).unwrap();
        assert_eq!(mo.padding, 1);
        assert_eq!(mo.w.dim(), 1);
        // det is preserved up to a nonzero scalar.
        let dl = l.det().unwrap();
        let dw = mo.w.det().unwrap();
        assert_eq!(dl.deg_or0(), dw.deg_or0());
    }

    #[test]
    fn factor_pencil_nonmonic() {
        // L = [[x,1],[0,1]]: full, non-unit, non-monic.
        let l = Pencil::new(rm(&[&[0, 1], &[0, 1]]), rm(&[&[1, 0], &[0, 0]])).unwrap();
        check_pencil_factorization(&l, 1);
    }

    #[test]
    fn factor_pencil_rejects_units_and_singular() {
        let l = Pencil::new(RMat::identity(2), RMat::zeros(2, 2)).unwrap();
        assert!(matches!(factor_pencil(&l), Err(Error::UnitInput)));
        let l = Pencil::new(RMat::zeros(2, 2), RMat::zeros(2, 2)).unwrap();
        assert!(matches!(factor_pencil(&l), Err(Error::Singular)));
    }
}
