//! Seeded random-instance generator: builds matrices with a known complete
//! factorization M = U_0·A_1·U_1·…·A_r·U_r from unitriangular/permutation
//! units U_i and companion-based linear atoms A_i.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::extract::{AtomCertificate, AtomFactorization};
use crate::pmat::PMat;
use crate::unifactor;
use crate::upoly::UPoly;

/// Size limits for generated instances.
#[derive(Clone, Debug)]
pub struct GenLimits {
    pub max_dim: usize,
    pub max_deg: usize,
    pub max_coeff_bits: u32,
}

impl Default for GenLimits {
    fn default() -> Self {
        GenLimits {
            max_dim: 5,
            max_deg: 4,
            max_coeff_bits: 8,
        }
    }
}

/// A generated matrix together with its ground-truth atom factorization.
#[derive(Clone, Debug)]
pub struct GeneratedInstance {
    pub m: PMat,
    pub ground_truth: AtomFactorization,
}

fn random_monic_irreducible(rng: &mut ChaCha8Rng, deg: usize, bound: i64) -> Result<UPoly> {
    if deg == 1 {
        let b = rng.gen_range(-bound..=bound);
        return Ok(UPoly::from_ints(&[b, 1]));
    }
    for _ in 0..300 {
        let mut coeffs: Vec<i64> = (0..deg).map(|_| rng.gen_range(-bound..=bound)).collect();
        if coeffs[0] == 0 {
            coeffs[0] = 1;
        }
        coeffs.push(1);
        let f = UPoly::from_ints(&coeffs);
        if unifactor::is_irreducible(&f)? {
            return Ok(f);
        }
    }
    // x^deg - 2 is irreducible for every degree (Eisenstein at 2).
    let mut coeffs = vec![0i64; deg + 1];
    coeffs[0] = -2;
    coeffs[deg] = 1;
    Ok(UPoly::from_ints(&coeffs))
}

/// Linear atom (x·I_k − C_f) ⊕ I_{d−k} for the companion matrix C_f of a
/// monic irreducible f with k = deg f ≤ d. Its determinant is exactly f.
fn companion_atom(f: &UPoly, d: usize) -> PMat {
    let k = f.deg_or0();
    let mut a = PMat::identity(d);
    for r in 0..k {
        for c in 0..k {
            let mut e = UPoly::zero();
            if r == c {
                e = &e + &UPoly::x();
            }
            if r == c + 1 {
                // companion subdiagonal 1 at (c+1, c) becomes −1 in x·I − C
                e = &e - &UPoly::one();
            }
            if c == k - 1 {
                e = &e + &UPoly::constant(f.coeff(r));
            }
            a.set(r, c, e);
        }
    }
    a
}

fn random_unit(rng: &mut ChaCha8Rng, d: usize) -> PMat {
    let mut u = PMat::identity(d);
    let lower: bool = rng.gen();
    for r in 0..d {
        for c in 0..d {
            let below = r > c;
            if (lower && below) || (!lower && c > r) {
                if rng.gen_bool(0.5) {
                    let v: i64 = rng.gen_range(-2..=2);
                    u.set(r, c, UPoly::from_ints(&[v]));
                }
            }
        }
    }
    let mut perm: Vec<usize> = (0..d).collect();
    perm.shuffle(rng);
    u.permute_cols(&perm);
    u
}

/// Generate a full non-unit matrix with known atoms, deterministically from
/// the seed. Atoms are linear; with r atoms the entry degree of M is ≤ r.
pub fn generate(seed: u64, limits: &GenLimits) -> Result<GeneratedInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = rng.gen_range(1..=limits.max_dim.max(1));
    let r = rng.gen_range(1..=limits.max_deg.clamp(1, 4));
    let bound = 1i64 << limits.max_coeff_bits.min(16);

    let mut atoms = Vec::with_capacity(r);
    for _ in 0..r {
        let k = rng.gen_range(1..=d);
        let f = random_monic_irreducible(&mut rng, k, bound - 1)?;
        atoms.push(companion_atom(&f, d));
    }
    let units: Vec<PMat> = (0..=r).map(|_| random_unit(&mut rng, d)).collect();

    // M = U_0 A_1 U_1 … A_r U_r; fold units into adjacent atoms for the
    // ground truth: B_1 = U_0 A_1 U_1, B_i = A_i U_i for i ≥ 2.
    let mut truth = Vec::with_capacity(r);
    for (i, a) in atoms.iter().enumerate() {
        let mut b = a.mat_mul(&units[i + 1]);
        if i == 0 {
            b = units[0].mat_mul(&b);
        }
        truth.push(b);
    }
    let mut m = truth[0].clone();
    for b in &truth[1..] {
        m = m.mat_mul(b);
    }

    let mut certificates = Vec::with_capacity(r);
    for b in &truth {
        let det = b.det()?;
        let irreducible = unifactor::is_irreducible(&det)?;
        if !irreducible {
            return Err(Error::InvariantViolation(
                "generated atom has reducible determinant".into(),
            ));
        }
        certificates.push(AtomCertificate { det, irreducible });
    }
    let det_m = m.det()?;
    if det_m.is_zero() || det_m.is_constant() {
        return Err(Error::InvariantViolation(
            "generated matrix is not full non-unit".into(),
        ));
    }

    Ok(GeneratedInstance {
        m,
        ground_truth: AtomFactorization {
            atoms: truth,
            certificates,
            telemetry: Vec::new(),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extract::verify_factorization;

    #[test]
    fn deterministic_per_seed() {
        let lim = GenLimits::default();
        let a = generate(42, &lim).unwrap();
        let b = generate(42, &lim).unwrap();
        assert_eq!(a.m, b.m);
        assert_eq!(a.ground_truth.atoms, b.ground_truth.atoms);
        let c = generate(43, &lim).unwrap();
        assert!(a.m != c.m || a.ground_truth.atoms != c.ground_truth.atoms);
    }

    #[test]
    fn ground_truth_verifies() {
        let lim = GenLimits::default();
        for seed in 0..25 {
            let inst = generate(seed, &lim).unwrap();
            let rep = verify_factorization(&inst.m, &inst.ground_truth);
            assert!(rep.pass(), "seed {seed}: {:?}", rep.first_failure());
        }
    }

    #[test]
    fn degenerate_dim_one_gives_linear_products() {
        let lim = GenLimits {
            max_dim: 1,
            ..GenLimits::default()
        };
        for seed in 0..10 {
            let inst = generate(seed, &lim).unwrap();
            assert_eq!(inst.m.rows(), 1);
            for a in &inst.ground_truth.atoms {
                assert_eq!(a.det().unwrap().deg_or0(), 1);
            }
        }
    }

    #[test]
    fn entry_degrees_within_atom_count() {
        let lim = GenLimits::default();
        for seed in 0..20 {
            let inst = generate(seed, &lim).unwrap();
            let r = inst.ground_truth.atoms.len();
            assert!((1..=4).contains(&r));
            let d = inst.m.rows();
            for row in 0..d {
                for col in 0..d {
                    assert!(inst.m.at(row, col).deg_or0() <= r);
                }
            }
        }
    }

    #[test]
    fn companion_atom_det_is_f() {
        let f = UPoly::from_ints(&[3, -1, 0, 1]);
        let a = companion_atom(&f, 5);
        assert_eq!(a.det().unwrap(), f);
        assert!(a.is_atom().unwrap());
    }
}
