//! Polynomial arithmetic over F_p for small primes, plus deterministic
//! Berlekamp factorization of squarefree monic polynomials.

use num_bigint::BigInt;

use num_traits::{Signed, ToPrimitive};

/// Dense polynomial over F_p, ascending coefficients, trimmed.
#[derive(Clone, PartialEq, Eq, Debug)]
pub(crate) struct ZPoly {
    pub p: u64,
    pub c: Vec<u64>,
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn invmod(a: u64, p: u64) -> u64 {
    // Fermat: p prime, a != 0 mod p.
    powmod(a % p, p - 2, p)
}

fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    acc
}

impl ZPoly {
    pub fn new(p: u64, mut c: Vec<u64>) -> Self {
        for v in &mut c {
            *v %= p;
        }
        while c.last() == Some(&0) {
            c.pop();
        }
        ZPoly { p, c }
    }

    pub fn zero(p: u64) -> Self {
        ZPoly { p, c: Vec::new() }
    }

    pub fn one(p: u64) -> Self {
        ZPoly { p, c: vec![1] }
    }

    pub fn constant(p: u64, v: u64) -> Self {
        ZPoly::new(p, vec![v])
    }

    pub fn from_bigints(p: u64, coeffs: &[BigInt]) -> Self {
        let pp = BigInt::from(p);
        let c = coeffs
            .iter()
            .map(|v| {
                let mut r = v % &pp;
                if r.is_negative() {
                    r += &pp;
                }
                r.to_u64().expect("residue fits in u64")
            })
            .collect();
        ZPoly::new(p, c)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn deg(&self) -> usize {
        // callers only ask for degrees of nonzero polynomials
        self.c.len().saturating_sub(1)
    }

    pub fn lead(&self) -> u64 {
        *self.c.last().unwrap_or(&0)
    }

    pub fn coeff(&self, i: usize) -> u64 {
        self.c.get(i).copied().unwrap_or(0)
    }

    pub fn monic(&self) -> ZPoly {
        if self.is_zero() || self.lead() == 1 {
            return self.clone();
        }
        self.scale(invmod(self.lead(), self.p))
    }

    pub fn scale(&self, s: u64) -> ZPoly {
        ZPoly::new(self.p, self.c.iter().map(|&v| mulmod(v, s, self.p)).collect())
    }

    pub fn add(&self, rhs: &ZPoly) -> ZPoly {
        let p = self.p;
        let n = self.c.len().max(rhs.c.len());
        ZPoly::new(p, (0..n).map(|i| (self.coeff(i) + rhs.coeff(i)) % p).collect())
    }

    pub fn sub(&self, rhs: &ZPoly) -> ZPoly {
        let p = self.p;
        let n = self.c.len().max(rhs.c.len());
        ZPoly::new(
            p,
            (0..n)
                .map(|i| (self.coeff(i) + p - rhs.coeff(i) % p) % p)
                .collect(),
        )
    }

    pub fn mul(&self, rhs: &ZPoly) -> ZPoly {
        if self.is_zero() || rhs.is_zero() {
            return ZPoly::zero(self.p);
        }
        let p = self.p;
        let mut out = vec![0u64; self.c.len() + rhs.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in rhs.c.iter().enumerate() {
                out[i + j] = (out[i + j] + mulmod(a, b, p)) % p;
            }
        }
        ZPoly::new(p, out)
    }

    pub fn divmod(&self, g: &ZPoly) -> (ZPoly, ZPoly) {
        assert!(!g.is_zero(), "division by zero over F_p");
        let p = self.p;
        let gd = g.deg();
        let ginv = invmod(g.lead(), p);
        let mut r = self.c.clone();
        if r.len() <= gd {
            return (ZPoly::zero(p), self.clone());
        }
        let qlen = r.len() - gd;
        let mut q = vec![0u64; qlen];
        for i in (0..qlen).rev() {
            let c = mulmod(r[i + gd], ginv, p);
            if c == 0 {
                continue;
            }
            q[i] = c;
            for (j, &gc) in g.c.iter().enumerate() {
                r[i + j] = (r[i + j] + p - mulmod(gc, c, p)) % p;
            }
        }
        (ZPoly::new(p, q), ZPoly::new(p, r))
    }

    pub fn rem(&self, g: &ZPoly) -> ZPoly {
        self.divmod(g).1
    }

    pub fn gcd(&self, rhs: &ZPoly) -> ZPoly {
        let mut a = self.clone();
        let mut b = rhs.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Extended gcd: (g, s, t) with s*self + t*rhs = g, g monic.
    pub fn ext_gcd(&self, rhs: &ZPoly) -> (ZPoly, ZPoly, ZPoly) {
        let p = self.p;
        let (mut r0, mut r1) = (self.clone(), rhs.clone());
        let (mut s0, mut s1) = (ZPoly::one(p), ZPoly::zero(p));
        let (mut t0, mut t1) = (ZPoly::zero(p), ZPoly::one(p));
        while !r1.is_zero() {
            let (q, r) = r0.divmod(&r1);
            let s = s0.sub(&q.mul(&s1));
            let t = t0.sub(&q.mul(&t1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
            t0 = t1;
            t1 = t;
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = invmod(r0.lead(), p);
        (r0.scale(inv), s0.scale(inv), t0.scale(inv))
    }

    pub fn derivative(&self) -> ZPoly {
        if self.c.len() <= 1 {
            return ZPoly::zero(self.p);
        }
        ZPoly::new(
            self.p,
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &v)| mulmod(v, (i as u64) % self.p, self.p))
                .collect(),
        )
    }

    /// x^e mod f by square-and-multiply.
    pub fn x_pow_mod(e: u64, f: &ZPoly) -> ZPoly {
        let p = f.p;
        let mut acc = ZPoly::one(p);
        let mut base = ZPoly::new(p, vec![0, 1]).rem(f);
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(f);
            }
            base = base.mul(&base).rem(f);
            e >>= 1;
        }
        acc
    }
}

/// Kernel basis of an n x n matrix over F_p (column-major input), as
/// coefficient vectors.
fn kernel_mod_p(p: u64, n: usize, m: &[Vec<u64>]) -> Vec<Vec<u64>> {
    // Row-reduce a copy; m[r][c] layout.
    let mut a: Vec<Vec<u64>> = m.to_vec();
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut r = 0;
    for c in 0..n {
        if r == n {
            break;
        }
        let Some(pr) = (r..n).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(r, pr);
        let inv = invmod(a[r][c], p);
        for j in 0..n {
            a[r][j] = mulmod(a[r][j], inv, p);
        }
        for i in 0..n {
            if i != r && a[i][c] != 0 {
                let f = a[i][c];
                for j in 0..n {
                    a[i][j] = (a[i][j] + p - mulmod(f, a[r][j], p)) % p;
                }
            }
        }
        pivots.push((r, c));
        r += 1;
    }
    let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
    let mut basis = Vec::new();
    for free in 0..n {
        if pivot_cols.contains(&free) {
            continue;
        }
        let mut v = vec![0u64; n];
        v[free] = 1;
        for &(pr, pc) in &pivots {
            v[pc] = (p - a[pr][free]) % p;
        }
        basis.push(v);
    }
    basis
}

/// Deterministic Berlekamp factorization of a monic squarefree polynomial
/// over F_p. Returns monic irreducible factors sorted by (degree, coeffs).
pub(crate) fn berlekamp(f: &ZPoly) -> Vec<ZPoly> {
    let p = f.p;
    let n = f.deg();
    if n <= 1 {
        return vec![f.monic()];
    }
    // Frobenius matrix: row i, column j holds the x^i coefficient of x^(jp) mod f.
    let xp = ZPoly::x_pow_mod(p, f);
    let mut pw = ZPoly::one(p);
    let mut q = vec![vec![0u64; n]; n];
    for j in 0..n {
        for i in 0..n {
            q[i][j] = pw.coeff(i);
        }
        pw = pw.mul(&xp).rem(f);
    }
    // Q - I
    for i in 0..n {
        q[i][i] = (q[i][i] + p - 1) % p;
    }
    let kernel = kernel_mod_p(p, n, &q);
    let r = kernel.len();
    let mut factors = vec![f.monic()];
    for v in &kernel {
        if factors.len() == r {
            break;
        }
        let vp = ZPoly::new(p, v.clone());
        let mut next = Vec::new();
        for u in factors {
            if u.deg() <= 1 {
                next.push(u);
                continue;
            }
            let mut rest = u;
            for s in 0..p {
                if rest.deg() == 0 {
                    break;
                }
                let shifted = vp.sub(&ZPoly::constant(p, s));
                let g = rest.gcd(&shifted);
                if !g.is_zero() && g.deg() > 0 && g.deg() < rest.deg() {
                    next.push(g.clone());
                    rest = rest.divmod(&g).0.monic();
                }
            }
            if rest.deg() > 0 {
                next.push(rest);
            }
            if 1 + next.len() > r {
                // already enough pieces for the remaining factors
            }
        }
        factors = next;
    }
    factors.sort_by(|a, b| a.deg().cmp(&b.deg()).then_with(|| a.c.cmp(&b.c)));
    factors
}

/// Iterator over odd primes 3, 5, 7, ... by trial division.
pub(crate) fn small_primes() -> impl Iterator<Item = u64> {
    (3u64..).filter(|&n| {
        if n % 2 == 0 {
            return false;
        }
        let mut d = 3;
        while d * d <= n {
            if n % d == 0 {
                return false;
            }
            d += 2;
        }
        true
    })
}
