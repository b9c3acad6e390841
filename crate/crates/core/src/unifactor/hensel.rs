//! Quadratic two-factor Hensel lifting over Z/m, organised as a binary
//! factor tree so a full list of modular factors lifts in one pass.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::zp::ZPoly;

/// Dense integer polynomial with coefficients reduced into [0, m).
type IPoly = Vec<BigInt>;

fn norm(mut v: IPoly, m: &BigInt) -> IPoly {
    for c in &mut v {
        *c = c.mod_floor(m);
    }
    while v.last().map(|c| c.is_zero()) == Some(true) {
        v.pop();
    }
    v
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

fn add(a: &IPoly, b: &IPoly, m: &BigInt) -> IPoly {
    let n = a.len().max(b.len());
    let mut out = vec![BigInt::zero(); n];
    for (i, slot) in out.iter_mut().enumerate() {
        let mut v = BigInt::zero();
        if i < a.len() {
            v += &a[i];
        }
        if i < b.len() {
            v += &b[i];
        }
        *slot = v;
    }
    norm(out, m)
}

fn sub(a: &IPoly, b: &IPoly, m: &BigInt) -> IPoly {
    let n = a.len().max(b.len());
    let mut out = vec![BigInt::zero(); n];
    for (i, slot) in out.iter_mut().enumerate() {
        let mut v = BigInt::zero();
        if i < a.len() {
            v += &a[i];
        }
        if i < b.len() {
            v -= &b[i];
        }
        *slot = v;
    }
    norm(out, m)
}

fn mul(a: &IPoly, b: &IPoly, m: &BigInt) -> IPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, ca) in a.iter().enumerate() {
        if ca.is_zero() {
            continue;
        }
        for (j, cb) in b.iter().enumerate() {
            out[i + j] += ca * cb;
        }
    }
    norm(out, m)
}

/// Division with remainder mod m; the divisor must be monic.
fn divmod_monic(a: &IPoly, g: &IPoly, m: &BigInt) -> (IPoly, IPoly) {
    debug_assert!(g.last().map(|c| c.is_one()) == Some(true), "divisor must be monic");
    let gd = g.len() - 1;
    let mut r = a.clone();
    if r.len() <= gd {
        return (Vec::new(), norm(r, m));
    }
    let qlen = r.len() - gd;
    let mut q = vec![BigInt::zero(); qlen];
    for i in (0..qlen).rev() {
        let c = r[i + gd].mod_floor(m);
        if c.is_zero() {
            r[i + gd] = BigInt::zero();
            continue;
        }
        for (j, gc) in g.iter().enumerate() {
            let v = (&r[i + j] - &c * gc).mod_floor(m);
            r[i + j] = v;
        }
        q[i] = c;
    }
    (norm(q, m), norm(r, m))
}

fn from_zpoly(f: &ZPoly) -> IPoly {
    f.c.iter().map(|&v| BigInt::from(v)).collect()
}

/// One quadratic step: from (g, h, s, t) valid mod m to the same data
/// valid mod m^2. Requires f ≡ g h (mod m), s g + t h ≡ 1 (mod m), with
/// f, g, h monic, deg s < deg h, deg t < deg g.
fn hensel_step(
    f: &IPoly,
    g: &IPoly,
    h: &IPoly,
    s: &IPoly,
    t: &IPoly,
    m2: &BigInt,
) -> (IPoly, IPoly, IPoly, IPoly) {
    let e = sub(f, &mul(g, h, m2), m2);
    let (q, r) = divmod_monic(&mul(s, &e, m2), h, m2);
    let g1 = add(g, &add(&mul(t, &e, m2), &mul(&q, g, m2), m2), m2);
    let h1 = add(h, &r, m2);
    let b = sub(
        &add(&mul(s, &g1, m2), &mul(t, &h1, m2), m2),
        &vec![BigInt::one()],
        m2,
    );
    let (c, d) = divmod_monic(&mul(s, &b, m2), &h1, m2);
    let s1 = sub(s, &d, m2);
    let t1 = sub(t, &add(&mul(t, &b, m2), &mul(&c, &g1, m2), m2), m2);
    (g1, h1, s1, t1)
}

/// Lift a two-factor split of f from mod p to mod m for some m >= target,
/// returning (g, h) reduced mod target.
fn lift_pair(
    f: &IPoly,
    g0: &ZPoly,
    h0: &ZPoly,
    p: u64,
    target: &BigInt,
) -> (IPoly, IPoly) {
    // Bezout data mod p with the degree normalization the step needs.
    let (one, s0, t0) = g0.ext_gcd(h0);
    debug_assert_eq!(one, ZPoly::one(p));
    let (s0, t0) = if !h0.is_zero() && s0.deg() >= h0.deg() && !s0.is_zero() {
        let (q, s_red) = s0.divmod(h0);
        let t_red = t0.add(&q.mul(g0));
        (s_red, t_red)
    } else {
        (s0, t0)
    };
    let mut m = BigInt::from(p);
    let mut g = from_zpoly(g0);
    let mut h = from_zpoly(h0);
    let mut s = from_zpoly(&s0);
    let mut t = from_zpoly(&t0);
    while &m < target {
        let m2 = &m * &m;
        let fm = norm(f.clone(), &m2);
        let (g1, h1, s1, t1) = hensel_step(&fm, &g, &h, &s, &t, &m2);
        g = g1;
        h = h1;
        s = s1;
        t = t1;
        m = m2;
    }
    (norm(g, target), norm(h, target))
}

/// Lift all modular factors of a monic squarefree f (their product mod p)
/// to factors mod target, where target is a power of p. The leaves must be
/// monic and pairwise coprime mod p; output order matches input order.
pub(crate) fn lift_tree(f: &IPoly, leaves: &[ZPoly], p: u64, target: &BigInt) -> Vec<IPoly> {
    if leaves.len() == 1 {
        return vec![norm(f.clone(), target)];
    }
    let mid = leaves.len() / 2;
    let g0 = leaves[..mid]
        .iter()
        .fold(ZPoly::one(p), |a, b| a.mul(b));
    let h0 = leaves[mid..]
        .iter()
        .fold(ZPoly::one(p), |a, b| a.mul(b));
    let (g, h) = lift_pair(f, &g0, &h0, p, target);
    let mut out = lift_tree(&g, &leaves[..mid], p, target);
    out.extend(lift_tree(&h, &leaves[mid..], p, target));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ip(c: &[i64]) -> IPoly {
        c.iter().map(|&v| BigInt::from(v)).collect()
    }

    #[test]
    fn lift_x2_plus_1_mod_25() {
        // x^2 + 1 = (x+2)(x+3) mod 5 lifts to (x+7)(x+18) mod 25.
        let f = ip(&[1, 0, 1]);
        let leaves = vec![ZPoly::new(5, vec![2, 1]), ZPoly::new(5, vec![3, 1])];
        let out = lift_tree(&f, &leaves, 5, &BigInt::from(25));
        assert_eq!(out, vec![ip(&[7, 1]), ip(&[18, 1])]);
    }

    #[test]
    fn lift_three_factors() {
        // f = (x-1)(x-2)(x-3) = x^3 - 6x^2 + 11x - 6, lift mod 7 -> 7^4.
        let f = ip(&[-6, 11, -6, 1]);
        let leaves = vec![
            ZPoly::new(7, vec![6, 1]), // x - 1
            ZPoly::new(7, vec![5, 1]), // x - 2
            ZPoly::new(7, vec![4, 1]), // x - 3
        ];
        let m = BigInt::from(7u32).pow(4);
        let out = lift_tree(&norm(f.clone(), &m), &leaves, 7, &m);
        // Product must reconstruct f mod 7^4 and each factor reduce correctly mod 7.
        let prod = out
            .iter()
            .fold(vec![BigInt::one()], |a, b| mul(&a, b, &m));
        assert_eq!(prod, norm(f, &m));
        assert_eq!(out[0], norm(ip(&[-1, 1]), &m));
        assert_eq!(out[1], norm(ip(&[-2, 1]), &m));
        assert_eq!(out[2], norm(ip(&[-3, 1]), &m));
    }
}
