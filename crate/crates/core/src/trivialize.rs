//! Trivialization of matrix relations C·U = 0 over Q[x]: the T-normal-form
//! route for linear C, and a unimodular column-compression route for
//! general polynomial C.

use crate::error::{Error, Result};
use crate::pmat::{ColOps, PMat};
use crate::rat::Rat;
use crate::rmat::RMat;
use crate::upoly::UPoly;

/// A linear matrix brought to T-normal form by unimodular column
/// operations: D = C·M with zero columns j1, independent scalar columns j2
/// and non-scalar columns j3 whose scalar matrix [A B''] has full column
/// rank.
#[derive(Clone, Debug)]
pub struct TNormalForm {
    pub m: PMat,
    pub m_inv: PMat,
    pub d: PMat,
    pub j1: Vec<usize>,
    pub j2: Vec<usize>,
    pub j3: Vec<usize>,
}

/// Trivialization certificate: a unit N with inverse N_inv such that every
/// index lands in zero_cols (column of C·N is zero) or zero_rows (row of
/// N⁻¹·U is zero).
#[derive(Clone, Debug)]
pub struct TrivOutcome {
    pub n: PMat,
    pub n_inv: PMat,
    pub zero_cols: Vec<usize>,
    pub zero_rows: Vec<usize>,
}

/// Scalar matrix assembled from the chosen coefficient layer of the listed
/// columns of a polynomial matrix.
fn layer_cols(c: &PMat, layer: usize, cols: &[usize]) -> RMat {
    let full = c.coeff_matrix(layer);
    let grid: Vec<Vec<Rat>> = (0..c.rows())
        .map(|r| cols.iter().map(|&j| full.at(r, j).clone()).collect())
        .collect();
    if grid.is_empty() || cols.is_empty() {
        return RMat::zeros(c.rows(), cols.len());
    }
    RMat::from_rows(grid).expect("rectangular grid")
}

fn classify(d: &PMat, j: usize) -> u8 {
    let mut scalar = true;
    let mut zero = true;
    for r in 0..d.rows() {
        let e = d.at(r, j);
        if !e.is_zero() {
            zero = false;
        }
        if e.deg_or0() >= 1 {
            scalar = false;
        }
    }
    if zero {
        0
    } else if scalar {
        1
    } else {
        2
    }
}

/// Bring a linear matrix to T-normal form by unimodular column operations.
pub fn t_normal_form(c: &PMat) -> Result<TNormalForm> {
    if !c.is_linear() {
        return Err(Error::NotLinear);
    }
    let cols = c.cols();
    let mut d = c.clone();
    let mut ops = ColOps::new(cols);
    let mut j1: Vec<usize> = Vec::new();
    let mut j2: Vec<usize> = Vec::new();
    let mut j3: Vec<usize> = Vec::new();
    for j in 0..cols {
        match classify(&d, j) {
            0 => j1.push(j),
            1 => j2.push(j),
            _ => j3.push(j),
        }
    }

    // Make the scalar block independent: drive dependent scalar columns to
    // zero with constant column operations.
    let mut kept: Vec<usize> = Vec::new();
    for &j in &j2.clone() {
        let basis = layer_cols(&d, 0, &kept);
        let target = layer_cols(&d, 0, &[j]);
        let rhs: Vec<Rat> = (0..d.rows()).map(|r| target.at(r, 0).clone()).collect();
        match basis.solve(&rhs) {
            Some(sol) if !kept.is_empty() || rhs.iter().all(Rat::is_zero) => {
                for (idx, &src) in kept.iter().enumerate() {
                    let g = UPoly::constant(-&sol[idx]);
                    ops.add_scaled(&mut d, src, j, &g);
                }
                j2.retain(|&v| v != j);
                j1.push(j);
            }
            _ => kept.push(j),
        }
    }

    // While [A B''] lacks full column rank, drive the linear part of a
    // dependent non-scalar column to zero and migrate the column.
    loop {
        let a = layer_cols(&d, 0, &j2);
        let b2 = layer_cols(&d, 1, &j3);
        let combined = a.hstack(&b2);
        let (reduced, pivots) = combined.rref();
        if pivots.len() == combined.cols() {
            break;
        }
        // First non-pivot column; the scalar block is independent, so it
        // indexes into the linear part.
        let dep = (0..combined.cols())
            .find(|c| !pivots.contains(c))
            .expect("a dependent column exists");
        debug_assert!(dep >= j2.len());
        let j0 = j3[dep - j2.len()];
        // Express the dependent column over the pivot columns.
        for (pr, &pc) in pivots.iter().enumerate() {
            let coef = reduced.at(pr, dep).clone();
            if coef.is_zero() {
                continue;
            }
            if pc < j2.len() {
                // scalar column: multiply by x in the combination
                let g = UPoly::monomial(1, -&coef);
                ops.add_scaled(&mut d, j2[pc], j0, &g);
            } else {
                let g = UPoly::constant(-&coef);
                ops.add_scaled(&mut d, j3[pc - j2.len()], j0, &g);
            }
        }
        j3.retain(|&v| v != j0);
        debug_assert!(classify(&d, j0) != 2);
        // The remaining scalar part joins A if independent, else gets
        // cleared to zero.
        let basis = layer_cols(&d, 0, &j2);
        let rhs: Vec<Rat> = (0..d.rows()).map(|r| d.at(r, j0).coeff(0)).collect();
        if rhs.iter().all(Rat::is_zero) {
            j1.push(j0);
        } else if let Some(sol) = basis.solve(&rhs) {
            for (idx, &src) in j2.iter().enumerate() {
                let g = UPoly::constant(-&sol[idx]);
                ops.add_scaled(&mut d, src, j0, &g);
            }
            j1.push(j0);
        } else {
            j2.push(j0);
        }
    }
    j1.sort_unstable();
    j2.sort_unstable();
    j3.sort_unstable();
    Ok(TNormalForm {
        m: ops.acc,
        m_inv: ops.acc_inv,
        d,
        j1,
        j2,
        j3,
    })
}

/// Rational content of column j of a polynomial matrix: the positive
/// rational c with column/c integer and primitive. None for zero columns.
pub(crate) fn col_content(d: &PMat, j: usize) -> Option<Rat> {
    use num_bigint::BigInt;
    use num_integer::Integer;
    use num_traits::{One, Zero};
    let mut num_gcd = BigInt::zero();
    let mut den_lcm = BigInt::one();
    for r in 0..d.rows() {
        for c in d.at(r, j).coeffs() {
            if c.is_zero() {
                continue;
            }
            num_gcd = num_gcd.gcd(c.numer());
            den_lcm = den_lcm.lcm(c.denom());
        }
    }
    if num_gcd.is_zero() {
        None
    } else {
        Some(Rat::new(num_gcd, den_lcm).expect("nonzero denominator"))
    }
}

/// Scale column j by the reciprocal of its content, keeping coefficients
/// small during elimination. A constant scaling preserves unimodularity.
fn normalize_col(ops: &mut ColOps, d: &mut PMat, j: usize) {
    if let Some(content) = col_content(d, j) {
        let inv = content.recip().expect("nonzero content");
        if !inv.is_one() {
            ops.scale(d, j, &inv);
        }
    }
}

fn check_relation(c: &PMat, u: &PMat) -> Result<()> {
    if c.cols() != u.rows() {
        return Err(Error::DimensionMismatch(
            "relation factors have mismatched shapes".into(),
        ));
    }
    let prod = c.mat_mul(u);
    if (0..prod.rows()).any(|r| (0..prod.cols()).any(|cc| !prod.at(r, cc).is_zero())) {
        return Err(Error::RelationDoesNotHold);
    }
    Ok(())
}

fn check_outcome(c: &PMat, u: &PMat, out: &TrivOutcome) -> Result<()> {
    let cn = c.mat_mul(&out.n);
    let nu = out.n_inv.mat_mul(u);
    for j in &out.zero_cols {
        if (0..cn.rows()).any(|r| !cn.at(r, *j).is_zero()) {
            return Err(Error::InvariantViolation(format!(
                "column {j} of C·N is not zero"
            )));
        }
    }
    for i in &out.zero_rows {
        if (0..nu.cols()).any(|cc| !nu.at(*i, cc).is_zero()) {
            return Err(Error::InvariantViolation(format!(
                "row {i} of N⁻¹·U is not zero"
            )));
        }
    }
    let mut all: Vec<usize> = out.zero_cols.iter().chain(out.zero_rows.iter()).copied().collect();
    all.sort_unstable();
    all.dedup();
    if all != (0..c.cols()).collect::<Vec<_>>() {
        return Err(Error::InvariantViolation(
            "zero pattern does not cover all indices".into(),
        ));
    }
    Ok(())
}

/// Trivialize C·U = 0 for a linear matrix C via T-normal form.
pub fn trivialize_linear(c: &PMat, u: &PMat) -> Result<TrivOutcome> {
    if !c.is_linear() {
        return Err(Error::NotLinear);
    }
    check_relation(c, u)?;
    let tn = t_normal_form(c)?;
    let mut d = tn.d.clone();
    let mut ops = ColOps::new(c.cols());
    // Rows making the scalar block square and invertible.
    let a = layer_cols(&d, 0, &tn.j2);
    let rows = a.independent_rows();
    debug_assert_eq!(rows.len(), tn.j2.len());
    let a_sq_rows: Vec<Vec<Rat>> = rows
        .iter()
        .map(|&r| (0..tn.j2.len()).map(|idx| a.at(r, idx).clone()).collect())
        .collect();
    let a_sq = if a_sq_rows.is_empty() {
        RMat::zeros(0, 0)
    } else {
        RMat::from_rows(a_sq_rows).expect("square grid")
    };
    // Express each non-scalar column over the scalar block on those rows,
    // with coefficients a + b·x solved from two scalar systems.
    for &j in &tn.j3 {
        if tn.j2.is_empty() {
            break;
        }
        let rhs0: Vec<Rat> = rows.iter().map(|&r| d.at(r, j).coeff(0)).collect();
        let rhs1: Vec<Rat> = rows.iter().map(|&r| d.at(r, j).coeff(1)).collect();
        let sa = a_sq.solve(&rhs0).ok_or_else(|| {
            Error::InvariantViolation("scalar block not invertible on chosen rows".into())
        })?;
        let sb = a_sq.solve(&rhs1).ok_or_else(|| {
            Error::InvariantViolation("scalar block not invertible on chosen rows".into())
        })?;
        for (idx, &src) in tn.j2.iter().enumerate() {
            let g = UPoly::new(vec![-&sa[idx], -&sb[idx]]);
            ops.add_scaled(&mut d, src, j, &g);
        }
    }
    let out = TrivOutcome {
        n: tn.m.mat_mul(&ops.acc),
        n_inv: ops.acc_inv.mat_mul(&tn.m_inv),
        zero_cols: tn.j1.clone(),
        zero_rows: {
            let mut v: Vec<usize> = tn.j2.iter().chain(tn.j3.iter()).copied().collect();
            v.sort_unstable();
            v
        },
    };
    check_outcome(c, u, &out)?;
    Ok(out)
}

/// Trivialize C·U = 0 for arbitrary polynomial C by unimodular column
/// compression C·N = [H | 0] with H of full column rank.
pub fn trivialize_general(c: &PMat, u: &PMat) -> Result<TrivOutcome> {
    check_relation(c, u)?;
    let cols = c.cols();
    if c.rank_fraction_field() == cols {
        // Full column rank forces U = 0; the identity works.
        let out = TrivOutcome {
            n: PMat::identity(cols),
            n_inv: PMat::identity(cols),
            zero_cols: Vec::new(),
            zero_rows: (0..cols).collect(),
        };
        check_outcome(c, u, &out)?;
        return Ok(out);
    }
    // Column reduction: repeatedly cancel a scalar dependency among the
    // leading column coefficient vectors with a monomial column operation.
    // The degree of one column strictly drops each round, so this
    // terminates; afterwards the nonzero columns are linearly independent
    // over Q(x) and the zero columns span the compressed kernel part.
    let mut d = c.clone();
    let mut ops = ColOps::new(cols);
    loop {
        let col_deg = |d: &PMat, j: usize| -> Option<usize> {
            (0..d.rows())
                .filter(|&r| !d.at(r, j).is_zero())
                .map(|r| d.at(r, j).deg_or0())
                .max()
        };
        let active: Vec<(usize, usize)> = (0..cols)
            .filter_map(|j| col_deg(&d, j).map(|deg| (j, deg)))
            .collect();
        if active.is_empty() {
            break;
        }
        // Leading coefficient vectors, one per nonzero column.
        let lc_grid: Vec<Vec<Rat>> = (0..d.rows())
            .map(|r| {
                active
                    .iter()
                    .map(|&(j, deg)| d.at(r, j).coeff(deg))
                    .collect()
            })
            .collect();
        let lc = RMat::from_rows(lc_grid).expect("rectangular grid");
        let kernel = lc.kernel_basis();
        let Some(alpha) = kernel.first() else {
            break; // column reduced
        };
        // Cancel into the highest-degree column of the dependency support.
        let support: Vec<usize> = (0..active.len())
            .filter(|&i| !alpha[i].is_zero())
            .collect();
        let &target = support
            .iter()
            .max_by_key(|&&i| (active[i].1, active[i].0))
            .unwrap();
        let (tj, tdeg) = active[target];
        let at_inv = alpha[target].recip()?;
        for &i in &support {
            if i == target {
                continue;
            }
            let (j, deg) = active[i];
            let g = UPoly::monomial(tdeg - deg, &alpha[i] * &at_inv);
            ops.add_scaled(&mut d, j, tj, &g);
        }
        normalize_col(&mut ops, &mut d, tj);
    }
    // Nonzero columns to the front, zero columns to the back.
    let nonzero: Vec<usize> = (0..cols)
        .filter(|&j| (0..d.rows()).any(|r| !d.at(r, j).is_zero()))
        .collect();
    let rho = nonzero.len();
    let mut perm = nonzero;
    perm.extend((0..cols).filter(|j| {
        (0..d.rows()).all(|r| d.at(r, *j).is_zero())
    }));
    ops.permute(&mut d, &perm);
    let out = TrivOutcome {
        n: ops.acc,
        n_inv: ops.acc_inv,
        zero_cols: (rho..cols).collect(),
        zero_rows: (0..rho).collect(),
    };
    check_outcome(c, u, &out)?;
    Ok(out)
}

/// Trivialize C·U = 0 when the columns of U span the kernel of C over
/// Q(x), i.e. rank(C) = cols(C) − cols(U) and U has full column rank.
/// Row-reduces U to [T; 0] with a unimodular R; the first cols(U) columns
/// of R⁻¹ are then a saturated basis of the kernel module, so moving them
/// to the back of R⁻¹ yields the trivializing unit. The outcome predicate
/// is still checked exactly, so a violated precondition surfaces as an
/// error rather than a wrong certificate.
pub fn trivialize_with_kernel(c: &PMat, u: &PMat) -> Result<TrivOutcome> {
    check_relation(c, u)?;
    let l = u.rows();
    let d = u.cols();
    if c.cols() != l || d > l {
        return Err(Error::DimensionMismatch(
            "kernel candidate has incompatible shape".into(),
        ));
    }
    let k = l - d;
    let mut km = u.clone();
    let mut r = PMat::identity(l);
    let mut r_inv = PMat::identity(l);
    // row_dst += g·row_src on (K, R); inverse column op on R⁻¹.
    let add_row = |km: &mut PMat, r: &mut PMat, r_inv: &mut PMat,
                       src: usize, dst: usize, g: &UPoly| {
        km.add_scaled_row(src, dst, g);
        r.add_scaled_row(src, dst, g);
        r_inv.add_scaled_col(dst, src, &-g);
    };
    let mut pivot = 0usize;
    for col in 0..d {
        loop {
            let active: Vec<usize> =
                (pivot..l).filter(|&i| !km.at(i, col).is_zero()).collect();
            if active.is_empty() {
                return Err(Error::InvariantViolation(
                    "kernel candidate lost column rank".into(),
                ));
            }
            if active.len() == 1 {
                let i = active[0];
                if i != pivot {
                    km.swap_rows(i, pivot);
                    r.swap_rows(i, pivot);
                    r_inv.swap_cols(i, pivot);
                }
                pivot += 1;
                break;
            }
            let p = *active
                .iter()
                .min_by_key(|&&i| (km.at(i, col).deg_or0(), i))
                .unwrap();
            for &i in &active {
                if i == p {
                    continue;
                }
                let (q, _) = km.at(i, col).divmod(km.at(p, col))?;
                add_row(&mut km, &mut r, &mut r_inv, p, i, &-&q);
                // Keep the worked row primitive.
                if let Some(content) = row_content(&km, i) {
                    let inv = content.recip()?;
                    if !inv.is_one() {
                        km.scale_row(i, &inv);
                        r.scale_row(i, &inv);
                        r_inv.scale_col(i, &content);
                    }
                }
            }
        }
    }
    // N = R⁻¹ with the kernel basis columns (0..d) moved to the back.
    let perm: Vec<usize> = (d..l).chain(0..d).collect();
    let mut n = r_inv;
    n.permute_cols(&perm);
    let mut n_inv = r;
    n_inv.permute_rows(&perm);
    let out = TrivOutcome {
        n,
        n_inv,
        zero_cols: (k..l).collect(),
        zero_rows: (0..k).collect(),
    };
    check_outcome(c, u, &out)?;
    Ok(out)
}

/// Rational content of row i, analogous to [`col_content`].
pub(crate) fn row_content(d: &PMat, i: usize) -> Option<Rat> {
    use num_bigint::BigInt;
    use num_integer::Integer;
    use num_traits::{One, Zero};
    let mut num_gcd = BigInt::zero();
    let mut den_lcm = BigInt::one();
    for j in 0..d.cols() {
        for c in d.at(i, j).coeffs() {
            if c.is_zero() {
                continue;
            }
            num_gcd = num_gcd.gcd(c.numer());
            den_lcm = den_lcm.lcm(c.denom());
        }
    }
    if num_gcd.is_zero() {
        None
    } else {
        Some(Rat::new(num_gcd, den_lcm).expect("nonzero denominator"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn up(c: &[i64]) -> UPoly {
        UPoly::from_ints(c)
    }

    fn pm(rows: Vec<Vec<UPoly>>) -> PMat {
        PMat::from_rows(rows).unwrap()
    }

    #[test]
    fn tnormal_example_mixed() {
        // C = [[1, x], [0, 1]] -> M = [[1, -x], [0, 1]], D = I all-scalar.
        let c = pm(vec![
            vec![up(&[1]), up(&[0, 1])],
            vec![up(&[0]), up(&[1])],
        ]);
        let tn = t_normal_form(&c).unwrap();
        assert_eq!(tn.d, PMat::identity(2));
        assert_eq!(
            tn.m,
            pm(vec![vec![up(&[1]), up(&[0, -1])], vec![up(&[0]), up(&[1])]])
        );
        assert_eq!(tn.j2, vec![0, 1]);
        assert!(tn.j1.is_empty() && tn.j3.is_empty());
        assert_eq!(c.mat_mul(&tn.m), tn.d);
        assert_eq!(tn.m.mat_mul(&tn.m_inv), PMat::identity(2));
    }

    #[test]
    fn tnormal_scalar_independent() {
        let c = pm(vec![
            vec![up(&[1]), up(&[0])],
            vec![up(&[0]), up(&[1])],
        ]);
        let tn = t_normal_form(&c).unwrap();
        assert_eq!(tn.m, PMat::identity(2));
        assert_eq!(tn.j2, vec![0, 1]);
    }

    #[test]
    fn tnormal_zero_column() {
        let c = pm(vec![vec![up(&[0]), up(&[0, 1])]]);
        let tn = t_normal_form(&c).unwrap();
        assert_eq!(tn.j1, vec![0]);
        assert_eq!(tn.j3, vec![1]);
        assert_eq!(tn.d, c);
    }

    #[test]
    fn tnormal_invariant_holds() {
        // Columns with dependent linear parts force the while loop.
        let c = pm(vec![
            vec![up(&[0, 1]), up(&[1, 1])],
            vec![up(&[0, 1]), up(&[0, 1])],
        ]);
        let tn = t_normal_form(&c).unwrap();
        assert_eq!(c.mat_mul(&tn.m), tn.d);
        assert_eq!(tn.m.mat_mul(&tn.m_inv), PMat::identity(2));
        let a = layer_cols(&tn.d, 0, &tn.j2);
        let b2 = layer_cols(&tn.d, 1, &tn.j3);
        let comb = a.hstack(&b2);
        assert_eq!(comb.rank(), comb.cols());
    }

    #[test]
    fn trivialize_linear_examples() {
        // C = [x, 0], U = [0; 5]
        let c = pm(vec![vec![up(&[0, 1]), up(&[0])]]);
        let u = pm(vec![vec![up(&[0])], vec![up(&[5])]]);
        let out = trivialize_linear(&c, &u).unwrap();
        assert_eq!(out.n, PMat::identity(2));
        assert_eq!(out.zero_rows, vec![0]);
        assert_eq!(out.zero_cols, vec![1]);

        // C = [x, x], U = [1; -1]
        let c = pm(vec![vec![up(&[0, 1]), up(&[0, 1])]]);
        let u = pm(vec![vec![up(&[1])], vec![up(&[-1])]]);
        let out = trivialize_linear(&c, &u).unwrap();
        assert_eq!(
            out.n,
            pm(vec![vec![up(&[1]), up(&[-1])], vec![up(&[0]), up(&[1])]])
        );
        assert_eq!(
            c.mat_mul(&out.n),
            pm(vec![vec![up(&[0, 1]), up(&[0])]])
        );
        assert_eq!(
            out.n_inv.mat_mul(&u),
            pm(vec![vec![up(&[0])], vec![up(&[-1])]])
        );

        // U = 0
        let c = pm(vec![vec![up(&[1]), up(&[0, 1])]]);
        let u = PMat::zeros(2, 1);
        let out = trivialize_linear(&c, &u).unwrap();
        let mut all = out.zero_rows.clone();
        all.extend(&out.zero_cols);
        all.sort_unstable();
        all.dedup();
        assert_eq!(all, vec![0, 1]);
    }

    #[test]
    fn trivialize_linear_rejects_bad_relation() {
        let c = pm(vec![vec![up(&[0, 1]), up(&[0])]]);
        let u = pm(vec![vec![up(&[1])], vec![up(&[5])]]);
        assert!(matches!(
            trivialize_linear(&c, &u),
            Err(Error::RelationDoesNotHold)
        ));
    }

    #[test]
    fn trivialize_general_examples() {
        // C = [x^2, x^2], U = [1; -1]
        let c = pm(vec![vec![up(&[0, 0, 1]), up(&[0, 0, 1])]]);
        let u = pm(vec![vec![up(&[1])], vec![up(&[-1])]]);
        let out = trivialize_general(&c, &u).unwrap();
        assert_eq!(out.zero_cols, vec![1]);
        assert_eq!(out.zero_rows, vec![0]);
        let cn = c.mat_mul(&out.n);
        assert!(cn.at(0, 1).is_zero());
        assert_eq!(out.n.mat_mul(&out.n_inv), PMat::identity(2));

        // Full column rank -> identity.
        let c = pm(vec![
            vec![up(&[0, 1]), up(&[1])],
            vec![up(&[0]), up(&[0, 1])],
        ]);
        let u = PMat::zeros(2, 2);
        let out = trivialize_general(&c, &u).unwrap();
        assert_eq!(out.n, PMat::identity(2));
        assert_eq!(out.zero_rows, vec![0, 1]);
    }

    #[test]
    fn general_matches_linear_contract() {
        let c = pm(vec![vec![up(&[0, 1]), up(&[0, 1])]]);
        let u = pm(vec![vec![up(&[1])], vec![up(&[-1])]]);
        let a = trivialize_linear(&c, &u).unwrap();
        let b = trivialize_general(&c, &u).unwrap();
        for out in [&a, &b] {
            assert_eq!(out.n.mat_mul(&out.n_inv), PMat::identity(2));
            let cn = c.mat_mul(&out.n);
            let nu = out.n_inv.mat_mul(&u);
            for i in 0..2 {
                let col_zero = (0..cn.rows()).all(|r| cn.at(r, i).is_zero());
                let row_zero = (0..nu.cols()).all(|j| nu.at(i, j).is_zero());
                assert!(col_zero || row_zero);
            }
        }
    }
}
