use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rat::Rat;

/// Dense univariate polynomial over the rationals, coefficients in
/// ascending degree order. The zero polynomial is the empty coefficient
/// vector; otherwise the last coefficient is nonzero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct UPoly {
    coeffs: Vec<Rat>,
}

impl UPoly {
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(Rat::is_zero) {
            coeffs.pop();
        }
        UPoly { coeffs }
    }

    pub fn zero() -> Self {
        UPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        UPoly::constant(Rat::one())
    }

    pub fn x() -> Self {
        UPoly::new(vec![Rat::zero(), Rat::one()])
    }

    pub fn constant(c: Rat) -> Self {
        UPoly::new(vec![c])
    }

    pub fn monomial(deg: usize, c: Rat) -> Self {
        if c.is_zero() {
            return UPoly::zero();
        }
        let mut coeffs = vec![Rat::zero(); deg + 1];
        coeffs[deg] = c;
        UPoly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        UPoly::new(coeffs.iter().map(|&c| Rat::from_int(c)).collect())
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rat {
        self.coeffs.get(i).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    /// Degree with the zero polynomial mapped to 0.
    pub fn deg_or0(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.is_constant() && !self.is_zero() && self.coeff(0).is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// True if every term has degree at most 1.
    pub fn is_linear(&self) -> bool {
        self.coeffs.len() <= 2
    }

    pub fn leading(&self) -> Option<&Rat> {
        self.coeffs.last()
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return UPoly::zero();
        }
        UPoly {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn mul_xpow(&self, k: usize) -> Self {
        if self.is_zero() {
            return UPoly::zero();
        }
        let mut coeffs = vec![Rat::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        UPoly { coeffs }
    }

    /// Monic associate (zero stays zero).
    pub fn monic(&self) -> Self {
        match self.leading() {
            None => UPoly::zero(),
            Some(lc) => self.scale(&lc.recip().expect("nonzero leading coefficient")),
        }
    }

    /// Exact division with remainder: self = q*g + r, deg r < deg g.
    pub fn divmod(&self, g: &UPoly) -> Result<(UPoly, UPoly)> {
        let gd = g.degree().ok_or(Error::DivisionByZero)?;
        let glc = g.leading().unwrap().clone();
        let mut r = self.coeffs.clone();
        if r.len() <= gd {
            return Ok((UPoly::zero(), self.clone()));
        }
        let qlen = r.len() - gd;
        let mut q = vec![Rat::zero(); qlen];
        for i in (0..qlen).rev() {
            let c = &r[i + gd] / &glc;
            if c.is_zero() {
                continue;
            }
            for (j, gc) in g.coeffs.iter().enumerate() {
                let t = &r[i + j] - &(gc * &c);
                r[i + j] = t;
            }
            q[i] = c;
        }
        Ok((UPoly::new(q), UPoly::new(r)))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &UPoly) -> Result<UPoly> {
        if self.is_zero() && other.is_zero() {
            return Err(Error::ZeroInput);
        }
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.divmod(&b)?;
            a = b;
            b = r;
        }
        Ok(a.monic())
    }

    pub fn derivative(&self) -> UPoly {
        if self.coeffs.len() <= 1 {
            return UPoly::zero();
        }
        UPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * &Rat::from_int(i as i64))
                .collect(),
        )
    }

    /// Exact Horner evaluation.
    pub fn eval(&self, a: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * a) + c;
        }
        acc
    }

    pub fn eval_int(&self, a: i64) -> Rat {
        self.eval(&Rat::from_int(a))
    }

    /// Unique interpolating polynomial of degree < #points (Newton form).
    pub fn interp(points: &[(Rat, Rat)]) -> Result<UPoly> {
        for (i, (xi, _)) in points.iter().enumerate() {
            for (xj, _) in &points[..i] {
                if xi == xj {
                    return Err(Error::DuplicateAbscissa);
                }
            }
        }
        let n = points.len();
        if n == 0 {
            return Ok(UPoly::zero());
        }
        // Divided differences.
        let mut dd: Vec<Rat> = points.iter().map(|(_, y)| y.clone()).collect();
        for level in 1..n {
            for i in (level..n).rev() {
                let num = &dd[i] - &dd[i - 1];
                let den = &points[i].0 - &points[i - level].0;
                dd[i] = &num / &den;
            }
        }
        // Horner assembly of the Newton form.
        let mut poly = UPoly::zero();
        for i in (0..n).rev() {
            let lin = UPoly::new(vec![-&points[i].0, Rat::one()]);
            poly = &(&poly * &lin) + &UPoly::constant(dd[i].clone());
        }
        Ok(poly)
    }

    /// Substitute x -> x + a.
    pub fn shift(&self, a: &Rat) -> UPoly {
        let lin = UPoly::new(vec![a.clone(), Rat::one()]);
        let mut acc = UPoly::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * &lin) + &UPoly::constant(c.clone());
        }
        acc
    }

    /// Encoding size t * max_i b(a_i) for a degree-t polynomial; 0 for zero.
    pub fn encoding_size(&self) -> u64 {
        match self.degree() {
            None => 0,
            Some(t) => {
                let maxb = self.coeffs.iter().map(Rat::encoding_size).max().unwrap_or(0);
                t as u64 * maxb
            }
        }
    }

    /// Content c and primitive part: self = c * p where p has coprime
    /// integer coefficients and positive leading coefficient.
    pub fn content_and_primitive(&self) -> Option<(Rat, UPoly)> {
        if self.is_zero() {
            return None;
        }
        let mut den_lcm = BigInt::one();
        for c in &self.coeffs {
            den_lcm = den_lcm.lcm(c.denom());
        }
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| c.numer() * (&den_lcm / c.denom()))
            .collect();
        let mut g = BigInt::zero();
        for c in &ints {
            g = g.gcd(c);
        }
        if ints.last().unwrap().is_negative() {
            g = -g;
        }
        let prim = UPoly::new(ints.iter().map(|c| Rat::from_bigint(c / &g)).collect());
        let content = Rat::new(g, den_lcm).expect("nonzero denominator");
        Some((content, prim))
    }

    /// Integer coefficient vector, if every coefficient is an integer.
    pub fn to_int_coeffs(&self) -> Option<Vec<BigInt>> {
        self.coeffs
            .iter()
            .map(|c| c.is_integer().then(|| c.numer().clone()))
            .collect()
    }

    /// Mignotte-style bound 2^deg * ceil(||f||_2) on the coefficients of any
    /// integer factor of an integer polynomial f.
    pub fn mignotte_bound(&self) -> Result<BigInt> {
        if self.is_zero() {
            return Err(Error::ZeroInput);
        }
        let ints = self.to_int_coeffs().ok_or(Error::NonIntegerCoefficients)?;
        let norm_sq: BigInt = ints.iter().map(|c| c * c).sum();
        let mut root = norm_sq.sqrt();
        if &root * &root < norm_sq {
            root += 1;
        }
        Ok(root << self.deg_or0())
    }
}

impl Add for &UPoly {
    type Output = UPoly;
    fn add(self, rhs: &UPoly) -> UPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(&self.coeff(i) + &rhs.coeff(i));
        }
        UPoly::new(out)
    }
}

impl Sub for &UPoly {
    type Output = UPoly;
    fn sub(self, rhs: &UPoly) -> UPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(&self.coeff(i) - &rhs.coeff(i));
        }
        UPoly::new(out)
    }
}

impl Mul for &UPoly {
    type Output = UPoly;
    fn mul(self, rhs: &UPoly) -> UPoly {
        if self.is_zero() || rhs.is_zero() {
            return UPoly::zero();
        }
        let mut out = vec![Rat::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let t = &out[i + j] + &(a * b);
                out[i + j] = t;
            }
        }
        UPoly::new(out)
    }
}

impl Neg for &UPoly {
    type Output = UPoly;
    fn neg(self) -> UPoly {
        UPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl fmt::Display for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " {} ", if c.is_negative() { "-" } else { "+" })?;
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            first = false;
            let a = c.abs();
            match i {
                0 => write!(f, "{a}")?,
                _ => {
                    if !a.is_one() {
                        write!(f, "{a}*")?;
                    }
                    if i == 1 {
                        write!(f, "x")?;
                    } else {
                        write!(f, "x^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl Serialize for UPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.coeffs.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for UPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let coeffs = Vec::<Rat>::deserialize(deserializer)?;
        Ok(UPoly::new(coeffs))
    }
}
