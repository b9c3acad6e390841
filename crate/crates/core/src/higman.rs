//! Higman linearization: turn a polynomial matrix M into a linear pencil L
//! with P·L·Q = M ⊕ I, where P is upper unitriangular and Q is lower
//! unitriangular.

use crate::error::{Error, Result};
use crate::pencil::Pencil;
use crate::pmat::PMat;
use crate::upoly::UPoly;

/// Result of linearizing a polynomial matrix.
#[derive(Clone, Debug)]
pub struct HigmanOutcome {
    pub p: PMat,
    pub l: Pencil,
    pub q: PMat,
    pub original_dim: usize,
    pub padding: usize,
}

impl HigmanOutcome {
    /// The matrix P·L·Q, which must equal M ⊕ I_padding.
    pub fn reconstruct(&self) -> PMat {
        self.p.mat_mul(&self.l.to_pmat()).mat_mul(&self.q)
    }
}

/// One linearization step on entry (i, j) of an n×n matrix, with the entry
/// written as a + b·c. The result is (n+1)×(n+1): the entry becomes a, the
/// new column holds -b at row i, the new row holds c at column j and 1 on
/// the diagonal. P_step·M'·Q_step = M ⊕ I_1 exactly.
pub fn higman_step(
    m: &PMat,
    i: usize,
    j: usize,
    split: (&UPoly, &UPoly, &UPoly),
) -> Result<(PMat, PMat, PMat)> {
    let n = m.rows();
    if i >= n || j >= m.cols() {
        return Err(Error::IndexOutOfRange);
    }
    let (a, b, c) = split;
    if &(a + &(b * c)) != m.at(i, j) {
        return Err(Error::InvariantViolation(
            "split does not reproduce the matrix entry".into(),
        ));
    }
    let mut mp = m.pad_identity(1);
    mp.set(i, j, a.clone());
    mp.set(i, n, -b);
    mp.set(n, j, c.clone());

    let mut p_step = PMat::identity(n + 1);
    p_step.set(i, n, b.clone());
    let mut q_step = PMat::identity(n + 1);
    q_step.set(n, j, -c);
    Ok((mp, p_step, q_step))
}

/// Split a polynomial of degree >= 2 as f = f(0) + h·x with
/// h = (f - f(0))/x.
fn horner_split(f: &UPoly) -> (UPoly, UPoly, UPoly) {
    let a = UPoly::constant(f.coeff(0));
    let h = UPoly::new(f.coeffs()[1..].to_vec());
    (a, h, UPoly::x())
}

/// Linearize a square polynomial matrix by repeated Horner-split steps.
/// The padding is the total degree excess Σ max(deg e_ij - 1, 0).
pub fn linearize(m: &PMat) -> Result<HigmanOutcome> {
    if !m.is_square() {
        return Err(Error::NonSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let d = m.rows();
    let mut cur = m.clone();
    let mut p = PMat::identity(d);
    let mut q = PMat::identity(d);
    loop {
        let n = cur.rows();
        let mut target = None;
        'scan: for r in 0..n {
            for c in 0..n {
                if cur.at(r, c).deg_or0() >= 2 {
                    target = Some((r, c));
                    break 'scan;
                }
            }
        }
        let Some((r, c)) = target else { break };
        let f = cur.at(r, c).clone();
        let (a, b, x) = horner_split(&f);
        let (next, p_step, q_step) = higman_step(&cur, r, c, (&a, &b, &x))?;
        p = p.pad_identity(1).mat_mul(&p_step);
        q = q_step.mat_mul(&q.pad_identity(1));
        cur = next;
    }
    let l = Pencil::from_pmat(&cur)?;
    Ok(HigmanOutcome {
        p,
        q,
        original_dim: d,
        padding: cur.rows() - d,
        l,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn up(c: &[i64]) -> UPoly {
        UPoly::from_ints(c)
    }

    #[test]
    fn step_example_x_squared() {
        let m = PMat::from_rows(vec![vec![up(&[0, 0, 1])]]).unwrap();
        let (a, b, c) = (UPoly::zero(), UPoly::x(), UPoly::x());
        let (mp, p, q) = higman_step(&m, 0, 0, (&a, &b, &c)).unwrap();
        let expect = PMat::from_rows(vec![
            vec![up(&[0]), up(&[0, -1])],
            vec![up(&[0, 1]), up(&[1])],
        ])
        .unwrap();
        assert_eq!(mp, expect);
        let prod = p.mat_mul(&mp).mat_mul(&q);
        let target = m.pad_identity(1);
        assert_eq!(prod, target);
    }

    #[test]
    fn step_example_one_plus_x_squared() {
        let m = PMat::from_rows(vec![vec![up(&[1, 0, 1])]]).unwrap();
        let (a, b, c) = (UPoly::one(), UPoly::x(), UPoly::x());
        let (mp, p, q) = higman_step(&m, 0, 0, (&a, &b, &c)).unwrap();
        assert_eq!(
            mp,
            PMat::from_rows(vec![
                vec![up(&[1]), up(&[0, -1])],
                vec![up(&[0, 1]), up(&[1])],
            ])
            .unwrap()
        );
        assert_eq!(p.mat_mul(&mp).mat_mul(&q), m.pad_identity(1));
    }

    #[test]
    fn step_rejects_bad_split() {
        let m = PMat::from_rows(vec![vec![up(&[0, 0, 1])]]).unwrap();
        let (a, b, c) = (UPoly::one(), UPoly::x(), UPoly::x());
        assert!(higman_step(&m, 0, 0, (&a, &b, &c)).is_err());
    }

    #[test]
    fn linearize_already_linear() {
        let m = PMat::from_rows(vec![vec![up(&[0, 1])]]).unwrap();
        let out = linearize(&m).unwrap();
        assert_eq!(out.padding, 0);
        assert_eq!(out.p, PMat::identity(1));
        assert_eq!(out.q, PMat::identity(1));
        assert_eq!(out.l.to_pmat(), m);
    }

    #[test]
    fn linearize_x_squared() {
        let m = PMat::from_rows(vec![vec![up(&[0, 0, 1])]]).unwrap();
        let out = linearize(&m).unwrap();
        assert_eq!(out.padding, 1);
        assert_eq!(out.reconstruct(), m.pad_identity(1));
    }

    #[test]
    fn linearize_x_cubed() {
        let m = PMat::from_rows(vec![vec![up(&[0, 0, 0, 1])]]).unwrap();
        let out = linearize(&m).unwrap();
        assert_eq!(out.padding, 2);
        assert_eq!(out.reconstruct(), m.pad_identity(2));
        // det(L) = det(M) exactly since P, Q are unitriangular.
        assert_eq!(out.l.det().unwrap(), m.det().unwrap());
    }

    #[test]
    fn linearize_dense_matrix() {
        let m = PMat::from_rows(vec![
            vec![up(&[1, 2, 3]), up(&[0, 1])],
            vec![up(&[5]), up(&[-1, 0, 0, 2])],
        ])
        .unwrap();
        let out = linearize(&m).unwrap();
        assert_eq!(out.padding, 1 + 2);
        assert_eq!(out.reconstruct(), m.pad_identity(3));
        assert!(out.l.to_pmat().is_linear());
        assert_eq!(out.l.det().unwrap(), m.det().unwrap());
    }

    #[test]
    fn transforms_are_unitriangular() {
        let m = PMat::from_rows(vec![vec![up(&[1, 1, 1, 1])]]).unwrap();
        let out = linearize(&m).unwrap();
        let n = 1 + out.padding;
        for r in 0..n {
            assert_eq!(*out.p.at(r, r), UPoly::one());
            assert_eq!(*out.q.at(r, r), UPoly::one());
            for c in 0..r {
                assert!(out.p.at(r, c).is_zero());
                assert!(out.q.at(c, r).is_zero());
            }
        }
    }
}
