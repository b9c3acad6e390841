//! Acceptance suite. Each criterion prints exactly one "criterion N: PASS"
//! line when it holds; any violation fails the test with a diagnostic.

use std::time::Instant;

use atomfact::pencilfactor::{factor_pencil, good_basis, primary_decompose};
use atomfact::trivialize::{trivialize_general, trivialize_linear};
use atomfact::unifactor::factor_rational;
use atomfact::{
    factor_matrix, generate, higman, verify_factorization, GenLimits, PMat, Pencil, Rat, RMat,
    UPoly,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Integer square root for the perfect-square test.
fn isqrt(n: i128) -> i128 {
    if n < 0 {
        return -1;
    }
    let mut r = (n as f64).sqrt() as i128;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

fn divisors(n: i128) -> Vec<i128> {
    let n = n.abs();
    let mut out = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            out.push(-d);
            if d != n / d {
                out.push(n / d);
                out.push(-(n / d));
            }
        }
        d += 1;
    }
    out
}

/// Independent brute-force irreducibility oracle for deg <= 4 over Q:
/// monicize to an integer polynomial, then exhaustively search integer
/// roots (divisors of the constant term) and, for degree 4, monic integer
/// quadratic factors via divisor pairs of the constant term.
fn brute_force_irreducible(f: &UPoly) -> bool {
    let deg = match f.degree() {
        Some(d) => d,
        None => return false,
    };
    if deg == 0 {
        return false;
    }
    if deg == 1 {
        return true;
    }
    assert!(deg <= 4, "oracle only covers degree <= 4");
    let (_, prim) = f.content_and_primitive().expect("nonzero");
    let ints = prim.to_int_coeffs().expect("primitive integer coefficients");
    let c: Vec<i128> = ints
        .iter()
        .map(|b| i128::try_from(b).expect("small coefficients"))
        .collect();
    let lead = c[deg];
    // G(x) = lead^(deg-1) · f(x/lead) is monic with integer coefficients
    // and is irreducible over Q iff f is.
    let mut g = vec![0i128; deg + 1];
    for i in 0..deg {
        g[i] = c[i] * lead.pow((deg - 1 - i) as u32);
    }
    g[deg] = 1;
    let eval = |x: i128| -> i128 {
        let mut acc = 0i128;
        for gi in g.iter().rev() {
            acc = acc * x + gi;
        }
        acc
    };
    if g[0] == 0 {
        return false; // x divides G
    }
    for r in divisors(g[0]) {
        if eval(r) == 0 {
            return false;
        }
    }
    if deg < 4 {
        return true;
    }
    // Degree 4, no linear factor: search G = (x^2+bx+c)(x^2+b'x+c').
    let (g3, g2, g1, g0) = (g[3], g[2], g[1], g[0]);
    for cc in divisors(g0) {
        let cp = g0 / cc;
        if cc != cp {
            // b is forced by b+b' = g3 and b·c' + b'·c = g1.
            let num = g1 - g3 * cc;
            let den = cp - cc;
            if num % den != 0 {
                continue;
            }
            let b = num / den;
            let bp = g3 - b;
            if g2 == cc + cp + b * bp {
                return false;
            }
        } else {
            // c = c': consistent only if g1 = g3·c; then b, b' solve
            // t^2 - g3 t + (g2 - 2c) = 0 over the integers.
            if g1 != g3 * cc {
                continue;
            }
            let disc = g3 * g3 - 4 * (g2 - 2 * cc);
            let s = isqrt(disc);
            if s >= 0 && s * s == disc && (g3 - s) % 2 == 0 {
                return false;
            }
        }
    }
    true
}

#[test]
fn criterion_1_and_6_roundtrip_and_telemetry() {
    let start = Instant::now();
    let lim = GenLimits {
        max_dim: 5,
        max_deg: 4,
        max_coeff_bits: 8,
    };
    // Telemetry envelope: max stage size <= C_ENVELOPE · (input size)^4.
    // Frozen after the first green run, which observed a worst stage/input^4
    // ratio of 0.00463 over this seed range; the constant leaves a 4x margin.
    const C_ENVELOPE: f64 = 0.02;
    let mut worst_ratio = 0.0f64;
    for seed in 0..100u64 {
        let inst = generate(seed, &lim).expect("generation");
        let fac = factor_matrix(&inst.m).unwrap_or_else(|e| panic!("seed {seed}: {e}"));
        assert_eq!(fac.reconstruct(), inst.m, "seed {seed}: product mismatch");
        let omega = factor_rational(&inst.m.det().unwrap())
            .unwrap()
            .total_multiplicity() as usize;
        assert_eq!(fac.atoms.len(), omega, "seed {seed}: atom count != Ω(det M)");
        for cert in &fac.certificates {
            assert!(cert.irreducible, "seed {seed}: reducible certificate");
            if cert.det.deg_or0() <= 4 {
                assert!(
                    brute_force_irreducible(&cert.det),
                    "seed {seed}: oracle disagrees on {:?}",
                    cert.det
                );
            }
        }
        let s = fac.telemetry[0].encoding_size.max(1) as f64;
        for t in &fac.telemetry {
            let ratio = t.encoding_size as f64 / (s * s * s * s);
            worst_ratio = worst_ratio.max(ratio);
            assert!(
                (t.encoding_size as f64) <= C_ENVELOPE * s * s * s * s,
                "seed {seed}: stage {} size {} exceeds envelope (input size {s})",
                t.stage,
                t.encoding_size
            );
        }
    }
    let elapsed = start.elapsed();
    assert!(
        elapsed.as_secs() < 120,
        "runtime {elapsed:?} exceeds the 120 s budget"
    );
    println!("criterion 1: PASS (100 instances in {elapsed:.2?})");
    println!("criterion 6: PASS (worst stage/input^4 ratio {worst_ratio:.6})");
}

#[test]
fn criterion_2_higman_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for case in 0..200 {
        let d = rng.gen_range(1..=4);
        let mut rows = Vec::with_capacity(d);
        for _ in 0..d {
            let mut row = Vec::with_capacity(d);
            for _ in 0..d {
                let deg = rng.gen_range(0..=5usize);
                let coeffs: Vec<i64> = (0..=deg).map(|_| rng.gen_range(-10..=10)).collect();
                row.push(UPoly::from_ints(&coeffs));
            }
            rows.push(row);
        }
        let m = PMat::from_rows(rows).unwrap();
        let out = higman::linearize(&m).unwrap_or_else(|e| panic!("case {case}: {e}"));
        let mut pad = 0usize;
        for r in 0..d {
            for c in 0..d {
                pad += m.at(r, c).deg_or0().saturating_sub(1);
            }
        }
        assert_eq!(out.padding, pad, "case {case}: padding formula");
        assert!(out.l.to_pmat().is_linear(), "case {case}: L not linear");
        assert_eq!(
            out.reconstruct(),
            m.pad_identity(pad),
            "case {case}: P·L·Q != M ⊕ I"
        );
        let n = d + pad;
        for r in 0..n {
            assert_eq!(*out.p.at(r, r), UPoly::one());
            assert_eq!(*out.q.at(r, r), UPoly::one());
            for c in 0..r {
                assert!(out.p.at(r, c).is_zero(), "case {case}: P not upper");
                assert!(out.q.at(c, r).is_zero(), "case {case}: Q not lower");
            }
        }
    }
    println!("criterion 2: PASS");
}

#[test]
fn criterion_3_trivialization_contract() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for case in 0..100 {
        // C = [C1 | C1·T], U = [-T·W ; W] gives C·U = 0 with U drawn from
        // an exact kernel basis of C ([-T; I] spans a kernel complement).
        let k = rng.gen_range(1..=3usize);
        let h = rng.gen_range(1..=3usize);
        let dcols = rng.gen_range(1..=2usize);
        let linear_case = case % 2 == 0;
        let rand_poly = |rng: &mut ChaCha8Rng, max_deg: usize| {
            let deg = rng.gen_range(0..=max_deg);
            let coeffs: Vec<i64> = (0..=deg).map(|_| rng.gen_range(-5..=5)).collect();
            UPoly::from_ints(&coeffs)
        };
        let rand_mat = |rng: &mut ChaCha8Rng, r: usize, c: usize, max_deg: usize| {
            let mut m = PMat::zeros(r, c);
            for i in 0..r {
                for j in 0..c {
                    m.set(i, j, rand_poly(rng, max_deg));
                }
            }
            m
        };
        let c1 = rand_mat(&mut rng, k, h, if linear_case { 1 } else { 2 });
        let t = rand_mat(&mut rng, h, h, if linear_case { 0 } else { 1 });
        let w = rand_mat(&mut rng, h, dcols, 2);
        let mut c = PMat::zeros(k, 2 * h);
        c.set_block(0, 0, &c1);
        c.set_block(0, h, &c1.mat_mul(&t));
        let mut u = PMat::zeros(2 * h, dcols);
        u.set_block(0, 0, &t.mat_mul(&w).neg());
        u.set_block(h, 0, &w);
        assert!(c.mat_mul(&u).is_zero());

        let mut outcomes = vec![trivialize_general(&c, &u).unwrap()];
        if linear_case {
            assert!(c.is_linear());
            outcomes.push(trivialize_linear(&c, &u).unwrap());
        }
        for out in &outcomes {
            let dn = out.n.det().unwrap();
            assert!(
                !dn.is_zero() && dn.is_constant(),
                "case {case}: det(N) not constant nonzero"
            );
            assert!(out.n.mat_mul(&out.n_inv).is_identity(), "case {case}: N·N⁻¹");
            let cn = c.mat_mul(&out.n);
            let nu = out.n_inv.mat_mul(&u);
            for j in 0..c.cols() {
                let col_zero = (0..k).all(|r| cn.at(r, j).is_zero());
                let row_zero = (0..dcols).all(|m| nu.at(j, m).is_zero());
                assert!(col_zero || row_zero, "case {case}: index {j} disjunction");
            }
        }
    }
    println!("criterion 3: PASS");
}

fn random_char_poly(rng: &mut ChaCha8Rng) -> (UPoly, Vec<(UPoly, u32)>) {
    use atomfact::unifactor::is_irreducible;
    loop {
        let mut parts: Vec<(UPoly, u32)> = Vec::new();
        let mut total = 0usize;
        while total < 8 {
            let k = rng.gen_range(1..=3usize).min(8 - total);
            let coeffs: Vec<i64> = (0..k)
                .map(|_| rng.gen_range(-6..=6))
                .chain(std::iter::once(1))
                .collect();
            let f = UPoly::from_ints(&coeffs);
            if !is_irreducible(&f).unwrap_or(false) {
                continue;
            }
            if parts.iter().any(|(g, _)| *g == f) {
                continue;
            }
            let max_mult = (8 - total) / k;
            let d = rng.gen_range(1..=max_mult.max(1)) as u32;
            total += k * d as usize;
            parts.push((f, d));
            if rng.gen_bool(0.4) {
                break;
            }
        }
        if parts.is_empty() {
            continue;
        }
        let mut chi = UPoly::one();
        for (f, d) in &parts {
            for _ in 0..*d {
                chi = &chi * f;
            }
        }
        return (chi, parts);
    }
}

#[test]
fn criterion_4_and_5_pencil_vs_oracle_and_good_basis() {
    let mut rng = ChaCha8Rng::seed_from_u64(45);
    for case in 0..50 {
        let (chi, parts) = random_char_poly(&mut rng);
        let a = RMat::companion(&chi).unwrap();
        // A - xI as a pencil.
        let n = a.rows();
        let l = Pencil::new(a.clone(), RMat::identity(n).neg()).unwrap();
        let pf = factor_pencil(&l).unwrap_or_else(|e| panic!("case {case}: {e}"));
        let expected: u32 = parts.iter().map(|(_, d)| *d).sum();
        assert_eq!(
            pf.atoms.len(),
            expected as usize,
            "case {case}: atom count != Σ d_i"
        );
        assert_eq!(pf.reconstruct(), l.to_pmat(), "case {case}: reconstruction");
        // Determinant multiset matches the unifactor oracle up to scalars.
        let mut got: Vec<Vec<Rat>> = pf
            .atoms
            .iter()
            .map(|at| at.det().unwrap().monic().coeffs().to_vec())
            .collect();
        let mut want: Vec<Vec<Rat>> = Vec::new();
        let oracle = factor_rational(&chi).unwrap();
        for (f, e) in &oracle.factors {
            for _ in 0..*e {
                want.push(f.monic().coeffs().to_vec());
            }
        }
        let key = |v: &Vec<Rat>| format!("{v:?}");
        got.sort_by_key(key);
        want.sort_by_key(key);
        assert_eq!(got, want, "case {case}: det multiset");

        // Criterion 5: good-basis structure on every primary component.
        for comp in primary_decompose(&a).unwrap() {
            let k = comp.f.deg_or0();
            let layers = good_basis(&comp.block, &comp.f, comp.e_i).unwrap();
            let mut cum = 0usize;
            let mut cols: Vec<Vec<Rat>> = Vec::new();
            for layer in layers.iter().rev() {
                for set in &layer.cyclic_sets {
                    assert_eq!(set.len(), k);
                    cols.extend(set.iter().cloned());
                }
            }
            for layer in &layers {
                assert!(layer.nu > 0, "case {case}: tower not strictly increasing");
                assert_eq!(layer.nu % k, 0, "case {case}: ν_j not divisible by k");
                cum += layer.nu;
            }
            assert_eq!(cum, comp.block.rows());
            // Representation in the assembled (descending-layer) basis has
            // companion(f) as every diagonal block.
            let r = RMat::from_cols(&cols).unwrap();
            let rep = r.inverse().unwrap().mul(&comp.block).mul(&r);
            let companion = RMat::companion(&comp.f.monic()).unwrap();
            let blocks = cum / k;
            for b in 0..blocks {
                let idx: Vec<usize> = (b * k..(b + 1) * k).collect();
                assert_eq!(
                    rep.submatrix(&idx, &idx),
                    companion,
                    "case {case}: diagonal block {b} is not companion(f)"
                );
            }
        }
    }
    println!("criterion 4: PASS");
    println!("criterion 5: PASS");
}

#[test]
fn verify_detects_tampering() {
    let lim = GenLimits::default();
    let inst = generate(7, &lim).unwrap();
    let fac = factor_matrix(&inst.m).unwrap();
    assert!(verify_factorization(&inst.m, &fac).pass());
    let mut bad = fac.clone();
    let last = bad.atoms.last().unwrap().scale(&Rat::from_int(2));
    *bad.atoms.last_mut().unwrap() = last;
    let rep = verify_factorization(&inst.m, &bad);
    assert!(!rep.pass());
    assert!(rep.first_failure().is_some());
}
