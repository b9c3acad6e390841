//! Complete factorization of univariate rational polynomials into
//! irreducibles: squarefree decomposition, Berlekamp mod a small prime,
//! quadratic Hensel lifting, and Zassenhaus subset recombination.

mod hensel;
mod zp;

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rat::Rat;
use crate::upoly::UPoly;
use zp::ZPoly;

/// Factorization of a rational polynomial: a rational content times a
/// product of primitive integer irreducible factors with positive leading
/// coefficients, each with its multiplicity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IrreducibleFactorization {
    pub content: Rat,
    pub factors: Vec<(UPoly, u32)>,
}

impl IrreducibleFactorization {
    /// Multiply the factorization back out.
    pub fn reconstruct(&self) -> UPoly {
        let mut acc = UPoly::constant(self.content.clone());
        for (f, m) in &self.factors {
            for _ in 0..*m {
                acc = &acc * f;
            }
        }
        acc
    }

    /// Total number of irreducible factors counted with multiplicity.
    pub fn total_multiplicity(&self) -> u32 {
        self.factors.iter().map(|&(_, m)| m).sum()
    }
}

/// Yun squarefree decomposition. Returns monic squarefree pairwise-coprime
/// parts with multiplicities; the product with multiplicities reconstructs
/// f up to a constant.
pub fn squarefree_decompose(f: &UPoly) -> Result<Vec<(UPoly, u32)>> {
    if f.is_zero() {
        return Err(Error::ZeroInput);
    }
    let f = f.monic();
    if f.is_constant() {
        return Ok(Vec::new());
    }
    let df = f.derivative();
    let g = f.gcd(&df)?;
    let mut w = f.divmod(&g)?.0;
    let mut y = df.divmod(&g)?.0;
    let mut out = Vec::new();
    let mut i: u32 = 1;
    while w.degree() != Some(0) {
        let z = &y - &w.derivative();
        let part = w.gcd(&z)?;
        if part.degree().unwrap_or(0) > 0 {
            out.push((part.clone(), i));
        }
        w = w.divmod(&part)?.0;
        y = z.divmod(&part)?.0;
        i += 1;
    }
    Ok(out)
}

fn upoly_from_bigints(c: &[BigInt]) -> UPoly {
    UPoly::new(c.iter().map(|v| Rat::from_bigint(v.clone())).collect())
}

fn zpoly_to_upoly(f: &ZPoly) -> UPoly {
    UPoly::new(f.c.iter().map(|&v| Rat::from_int(v as i64)).collect())
}

fn check_squarefree_mod_p(fp: &ZPoly, f_deg: usize, p: u64) -> Result<()> {
    if fp.is_zero() || fp.deg() != f_deg {
        return Err(Error::BadPrime {
            p,
            reason: "p divides the leading coefficient".into(),
        });
    }
    let d = fp.derivative();
    if d.is_zero() || fp.gcd(&d).deg() != 0 {
        return Err(Error::BadPrime {
            p,
            reason: "f is not squarefree mod p".into(),
        });
    }
    Ok(())
}

/// Factor an integer polynomial f mod a small odd prime p into monic
/// irreducibles over F_p. Fails if p divides lead(f) or f is not squarefree
/// mod p; the caller retries with the next prime.
pub fn factor_mod_p(f: &UPoly, p: u64) -> Result<Vec<UPoly>> {
    if f.is_zero() {
        return Err(Error::ZeroInput);
    }
    let ints = f.to_int_coeffs().ok_or(Error::NonIntegerCoefficients)?;
    let fp = ZPoly::from_bigints(p, &ints);
    check_squarefree_mod_p(&fp, f.deg_or0(), p)?;
    Ok(zp::berlekamp(&fp.monic())
        .into_iter()
        .map(|g| zpoly_to_upoly(&g))
        .collect())
}

/// Lift monic modular factors of f from mod p to mod p^k; coefficients of
/// the result are representatives in [0, p^k). f must be an integer
/// polynomial with p not dividing its leading coefficient; the factors must
/// be pairwise coprime mod p with product congruent to f up to the leading
/// unit.
pub fn hensel_lift(factors: &[UPoly], f: &UPoly, p: u64, k: u32) -> Result<Vec<UPoly>> {
    let ints = f.to_int_coeffs().ok_or(Error::NonIntegerCoefficients)?;
    let leaves: Vec<ZPoly> = factors
        .iter()
        .map(|g| {
            let c = g.to_int_coeffs().ok_or(Error::NonIntegerCoefficients)?;
            Ok(ZPoly::from_bigints(p, &c).monic())
        })
        .collect::<Result<_>>()?;
    if leaves.is_empty() {
        return Err(Error::InvariantViolation("no modular factors to lift".into()));
    }
    let target = BigInt::from(p).pow(k);
    // Make f monic mod p^k so the tree root is monic; the dropped leading
    // unit is the "up to unit" allowance in the contract.
    let lead = ints.last().unwrap();
    let lead_inv = modinv(lead, &target).ok_or(Error::BadPrime {
        p,
        reason: "leading coefficient not invertible mod p^k".into(),
    })?;
    let fm: Vec<BigInt> = ints.iter().map(|c| (c * &lead_inv).mod_floor(&target)).collect();
    let lifted = hensel::lift_tree(&fm, &leaves, p, &target);
    Ok(lifted.iter().map(|g| upoly_from_bigints(g)).collect())
}

trait ModFloor {
    fn mod_floor(&self, m: &BigInt) -> BigInt;
}

impl ModFloor for BigInt {
    fn mod_floor(&self, m: &BigInt) -> BigInt {
        let r = self % m;
        if r.is_negative() {
            r + m
        } else {
            r
        }
    }
}

fn modinv(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    // Extended Euclid over the integers.
    let (mut r0, mut r1) = (m.clone(), a.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while !r1.is_zero() {
        let q = &r0 / &r1;
        let r = &r0 - &q * &r1;
        let t = &t0 - &q * &t1;
        r0 = r1;
        r1 = r;
        t0 = t1;
        t1 = t;
    }
    if r0.is_one() {
        Some(t0.mod_floor(m))
    } else {
        None
    }
}

fn balance(c: &BigInt, m: &BigInt) -> BigInt {
    let r = c.mod_floor(m);
    if &r * 2 > *m {
        r - m
    } else {
        r
    }
}

fn int_poly_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, ca) in a.iter().enumerate() {
        for (j, cb) in b.iter().enumerate() {
            out[i + j] += ca * cb;
        }
    }
    out
}

/// Exact division of integer polynomials by a monic divisor; None if the
/// remainder is nonzero.
fn int_divmod_monic_exact(a: &[BigInt], g: &[BigInt]) -> Option<Vec<BigInt>> {
    debug_assert!(g.last().map(|c| c.is_one()) == Some(true));
    let gd = g.len() - 1;
    if a.len() <= gd {
        return a.iter().all(|c| c.is_zero()).then(Vec::new);
    }
    let mut r = a.to_vec();
    let qlen = r.len() - gd;
    let mut q = vec![BigInt::zero(); qlen];
    for i in (0..qlen).rev() {
        let c = r[i + gd].clone();
        if !c.is_zero() {
            for (j, gc) in g.iter().enumerate() {
                let v = &r[i + j] - &c * gc;
                r[i + j] = v;
            }
        }
        q[i] = c;
    }
    r.iter().all(|c| c.is_zero()).then_some(q)
}

/// Factor a monic squarefree integer polynomial into monic integer
/// irreducibles via Zassenhaus: Berlekamp mod the first good odd prime,
/// Hensel lift past twice the Mignotte bound, subset recombination.
fn factor_monic_squarefree(g: &[BigInt]) -> Result<Vec<Vec<BigInt>>> {
    let n = g.len() - 1;
    if n <= 1 {
        return Ok(vec![g.to_vec()]);
    }
    // Pick the first odd prime where g stays squarefree.
    let mut chosen = None;
    for p in zp::small_primes().take(1000) {
        let fp = ZPoly::from_bigints(p, g);
        if check_squarefree_mod_p(&fp, n, p).is_ok() {
            chosen = Some((p, fp));
            break;
        }
    }
    let (p, fp) = chosen.ok_or_else(|| {
        Error::InvariantViolation("no squarefree prime found for factorization".into())
    })?;
    let modular = zp::berlekamp(&fp);
    if modular.len() == 1 {
        return Ok(vec![g.to_vec()]);
    }
    // Lift to p^k > 2 * Mignotte bound so balanced residues pin down true
    // integer factor coefficients.
    let bound = upoly_from_bigints(g).mignotte_bound()?;
    let target: BigInt = &bound * 2 + 1;
    let mut k = 1u32;
    let mut m = BigInt::from(p);
    while m < target {
        m *= BigInt::from(p);
        k += 1;
    }
    let m = BigInt::from(p).pow(k);
    let lifted = hensel::lift_tree(
        &g.iter().map(|c| c.mod_floor(&m)).collect::<Vec<_>>(),
        &modular,
        p,
        &m,
    );

    // Subset recombination over the lifted pool.
    let mut pool: Vec<Vec<BigInt>> = lifted;
    let mut rest: Vec<BigInt> = g.to_vec();
    let mut out = Vec::new();
    let mut size = 1usize;
    'outer: while 2 * size <= pool.len() {
        let indices: Vec<usize> = (0..pool.len()).collect();
        for combo in indices.iter().copied().combinations(size) {
            let prod_mod = combo
                .iter()
                .fold(vec![BigInt::one()], |a, &i| {
                    int_poly_mul(&a, &pool[i])
                        .iter()
                        .map(|c| c.mod_floor(&m))
                        .collect()
                });
            let cand: Vec<BigInt> = prod_mod.iter().map(|c| balance(c, &m)).collect();
            if cand.last().map(|c| c.is_one()) != Some(true) {
                continue;
            }
            if let Some(q) = int_divmod_monic_exact(&rest, &cand) {
                out.push(cand);
                rest = q;
                let keep: Vec<Vec<BigInt>> = pool
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| !combo.contains(i))
                    .map(|(_, v)| v.clone())
                    .collect();
                pool = keep;
                continue 'outer;
            }
        }
        size += 1;
    }
    if rest.len() > 1 {
        out.push(rest);
    }
    Ok(out)
}

/// Factor a primitive squarefree integer polynomial with positive leading
/// coefficient into primitive integer irreducibles with positive leading
/// coefficients.
fn factor_primitive_squarefree(g: &UPoly) -> Result<Vec<UPoly>> {
    let deg = g.deg_or0();
    if deg == 0 {
        return Ok(Vec::new());
    }
    if deg == 1 {
        return Ok(vec![g.clone()]);
    }
    let ints = g.to_int_coeffs().ok_or(Error::NonIntegerCoefficients)?;
    let lead = ints.last().unwrap().clone();
    // Monicize: G(x) = lead^(deg-1) * g(x/lead) is monic with integer
    // coefficients; factors map back by the reverse substitution.
    let monic: Vec<BigInt> = (0..=deg)
        .map(|i| {
            let mut pw = BigInt::one();
            for _ in 0..(deg - 1 - i.min(deg - 1)) {
                pw *= &lead;
            }
            if i == deg {
                BigInt::one()
            } else {
                &ints[i] * pw
            }
        })
        .collect();
    let factors = factor_monic_squarefree(&monic)?;
    let mut out = Vec::new();
    for h in &factors {
        // Undo the substitution: take the primitive part of h(lead * x).
        let mut pw = BigInt::one();
        let mapped: Vec<Rat> = h
            .iter()
            .map(|c| {
                let v = Rat::from_bigint(c * &pw);
                pw *= &lead;
                v
            })
            .collect();
        let (_, prim) = UPoly::new(mapped)
            .content_and_primitive()
            .ok_or(Error::ZeroInput)?;
        out.push(prim);
    }
    out.sort_by(compare_factors);
    Ok(out)
}

fn compare_factors(a: &UPoly, b: &UPoly) -> std::cmp::Ordering {
    a.deg_or0()
        .cmp(&b.deg_or0())
        .then_with(|| a.coeffs().cmp(b.coeffs()))
}

/// Complete factorization of a nonzero rational polynomial into a rational
/// content times primitive integer irreducibles with positive leading
/// coefficients. Deterministic: factors sorted by degree, then
/// lexicographically on coefficients.
pub fn factor_rational(f: &UPoly) -> Result<IrreducibleFactorization> {
    if f.is_zero() {
        return Err(Error::ZeroInput);
    }
    let mut factors: Vec<(UPoly, u32)> = Vec::new();
    for (part, mult) in squarefree_decompose(f)? {
        let (_, prim) = part.content_and_primitive().ok_or(Error::ZeroInput)?;
        for irr in factor_primitive_squarefree(&prim)? {
            factors.push((irr, mult));
        }
    }
    factors.sort_by(|(a, _), (b, _)| compare_factors(a, b));
    // Content = f / product of factor powers.
    let mut prod = UPoly::one();
    for (g, m) in &factors {
        for _ in 0..*m {
            prod = &prod * g;
        }
    }
    let (q, r) = f.divmod(&prod)?;
    if !r.is_zero() || !q.is_constant() {
        return Err(Error::InvariantViolation(
            "factorization does not reconstruct the input".into(),
        ));
    }
    Ok(IrreducibleFactorization {
        content: q.coeff(0),
        factors,
    })
}

/// True iff f is irreducible over the rationals (degree >= 1 and a single
/// factor of multiplicity one).
pub fn is_irreducible(f: &UPoly) -> Result<bool> {
    if f.is_zero() {
        return Err(Error::ZeroInput);
    }
    if f.is_constant() {
        return Ok(false);
    }
    let fac = factor_rational(f)?;
    Ok(fac.factors.len() == 1 && fac.factors[0].1 == 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn up(c: &[i64]) -> UPoly {
        UPoly::from_ints(c)
    }

    #[test]
    fn squarefree_examples() {
        // x^3 - x^2 -> [(x, 2), (x-1, 1)]
        let parts = squarefree_decompose(&up(&[0, 0, -1, 1])).unwrap();
        assert_eq!(parts, vec![(up(&[-1, 1]), 1), (up(&[0, 1]), 2)]);
        // x^2 - 1 squarefree already
        let parts = squarefree_decompose(&up(&[-1, 0, 1])).unwrap();
        assert_eq!(parts, vec![(up(&[-1, 0, 1]), 1)]);
        // (x-1)^4
        let parts = squarefree_decompose(&up(&[1, -4, 6, -4, 1])).unwrap();
        assert_eq!(parts, vec![(up(&[-1, 1]), 4)]);
    }

    #[test]
    fn factor_mod_p_examples() {
        let fs = factor_mod_p(&up(&[1, 0, 1]), 5).unwrap();
        assert_eq!(fs, vec![up(&[2, 1]), up(&[3, 1])]);
        let fs = factor_mod_p(&up(&[1, 0, 1]), 3).unwrap();
        assert_eq!(fs, vec![up(&[1, 0, 1])]);
        let fs = factor_mod_p(&up(&[0, 1]), 7).unwrap();
        assert_eq!(fs, vec![up(&[0, 1])]);
    }

    #[test]
    fn hensel_lift_example() {
        let lifted = hensel_lift(
            &[up(&[2, 1]), up(&[3, 1])],
            &up(&[1, 0, 1]),
            5,
            2,
        )
        .unwrap();
        assert_eq!(lifted, vec![up(&[7, 1]), up(&[18, 1])]);
        // k = 1 is the identity on residues.
        let same = hensel_lift(&[up(&[2, 1]), up(&[3, 1])], &up(&[1, 0, 1]), 5, 1).unwrap();
        assert_eq!(same, vec![up(&[2, 1]), up(&[3, 1])]);
    }

    #[test]
    fn factor_rational_examples() {
        let fac = factor_rational(&up(&[-1, 0, 1])).unwrap();
        assert_eq!(fac.content, Rat::one());
        assert_eq!(fac.factors, vec![(up(&[-1, 1]), 1), (up(&[1, 1]), 1)]);

        let fac = factor_rational(&up(&[-6, 0, 6])).unwrap();
        assert_eq!(fac.content, Rat::from_int(6));
        assert_eq!(fac.factors, vec![(up(&[-1, 1]), 1), (up(&[1, 1]), 1)]);

        let fac = factor_rational(&up(&[1, 0, 0, 0, 1])).unwrap();
        assert_eq!(fac.factors, vec![(up(&[1, 0, 0, 0, 1]), 1)]);
        assert_eq!(fac.reconstruct(), up(&[1, 0, 0, 0, 1]));
    }

    #[test]
    fn factor_rational_tricky() {
        // x^4 + 4 = (x^2-2x+2)(x^2+2x+2): needs 2-subset recombination at
        // most primes.
        let f = up(&[4, 0, 0, 0, 1]);
        let fac = factor_rational(&f).unwrap();
        assert_eq!(
            fac.factors,
            vec![(up(&[2, -2, 1]), 1), (up(&[2, 2, 1]), 1)]
        );
        assert_eq!(fac.reconstruct(), f);

        // Non-monic with repeated content: 12x^2 - 3 = 3(2x-1)(2x+1).
        let f = up(&[-3, 0, 12]);
        let fac = factor_rational(&f).unwrap();
        assert_eq!(fac.content, Rat::from_int(3));
        assert_eq!(fac.factors, vec![(up(&[-1, 2]), 1), (up(&[1, 2]), 1)]);
        assert_eq!(fac.reconstruct(), f);

        // Multiplicities: (x-1)^2 (x+2)^3.
        let f = &(&(&up(&[-1, 1]) * &up(&[-1, 1])) * &(&up(&[2, 1]) * &up(&[2, 1]))) * &up(&[2, 1]);
        let fac = factor_rational(&f).unwrap();
        assert_eq!(fac.factors, vec![(up(&[-1, 1]), 2), (up(&[2, 1]), 3)]);
        assert_eq!(fac.reconstruct(), f);
    }

    #[test]
    fn irreducibility() {
        assert!(is_irreducible(&up(&[-3, 1])).unwrap());
        assert!(!is_irreducible(&up(&[-1, 0, 1])).unwrap());
        assert!(is_irreducible(&up(&[1, 1, 1])).unwrap());
        assert!(!is_irreducible(&up(&[5])).unwrap());
        assert!(is_irreducible(&UPoly::zero()).is_err());
    }
}
