use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pmat::PMat;
use crate::rmat::RMat;
use crate::upoly::UPoly;

/// Linear pencil A0 + A1*x with scalar coefficient matrices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pencil {
    pub a0: RMat,
    pub a1: RMat,
}

impl Pencil {
    pub fn new(a0: RMat, a1: RMat) -> Result<Self> {
        if !a0.is_square() || a0.rows() != a1.rows() || a1.rows() != a1.cols() {
            return Err(Error::DimensionMismatch(
                "pencil coefficient matrices must be square of equal dimension".into(),
            ));
        }
        Ok(Pencil { a0, a1 })
    }

    pub fn dim(&self) -> usize {
        self.a0.rows()
    }

    /// The pencil A - xI for a scalar matrix A.
    pub fn char_pencil(a: &RMat) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::NonSquare {
                rows: a.rows(),
                cols: a.cols(),
            });
        }
        Pencil::new(a.clone(), RMat::identity(a.rows()).neg())
    }

    pub fn to_pmat(&self) -> PMat {
        let d = self.dim();
        let mut m = PMat::zeros(d, d);
        for r in 0..d {
            for c in 0..d {
                m.set(
                    r,
                    c,
                    UPoly::new(vec![self.a0.at(r, c).clone(), self.a1.at(r, c).clone()]),
                );
            }
        }
        m
    }

    pub fn from_pmat(m: &PMat) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::NonSquare {
                rows: m.rows(),
                cols: m.cols(),
            });
        }
        if !m.is_linear() {
            return Err(Error::NotLinear);
        }
        Pencil::new(m.coeff_matrix(0), m.coeff_matrix(1))
    }

    /// Monic: the degree-one coefficient matrix is invertible.
    pub fn is_monic(&self) -> bool {
        self.a1.inverse().is_some()
    }

    pub fn det(&self) -> Result<UPoly> {
        self.to_pmat().det()
    }
}

#[derive(Serialize, Deserialize)]
struct PencilDoc {
    dim: usize,
    a0: Vec<Vec<crate::rat::Rat>>,
    a1: Vec<Vec<crate::rat::Rat>>,
}

impl Serialize for Pencil {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let d = self.dim();
        let grid = |m: &RMat| (0..d).map(|r| m.row(r)).collect();
        PencilDoc {
            dim: d,
            a0: grid(&self.a0),
            a1: grid(&self.a1),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Pencil {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let doc = PencilDoc::deserialize(d)?;
        let build = |g: Vec<Vec<crate::rat::Rat>>| RMat::from_rows(g).map_err(serde::de::Error::custom);
        let a0 = build(doc.a0)?;
        let a1 = build(doc.a1)?;
        if a0.rows() != doc.dim || a0.cols() != doc.dim || a1.rows() != doc.dim || a1.cols() != doc.dim {
            return Err(serde::de::Error::custom("pencil grids do not match dim"));
        }
        Pencil::new(a0, a1).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::Rat;

    #[test]
    fn roundtrip_pmat() {
        let a0 = RMat::from_ints(&[&[1, 2], &[0, 1]]);
        let a1 = RMat::from_ints(&[&[1, 0], &[3, 1]]);
        let p = Pencil::new(a0, a1).unwrap();
        let m = p.to_pmat();
        let back = Pencil::from_pmat(&m).unwrap();
        assert_eq!(back, p);
        assert!(p.is_monic());
    }

    #[test]
    fn monic_detection() {
        let p = Pencil::new(RMat::identity(2), RMat::zeros(2, 2)).unwrap();
        assert!(!p.is_monic());
        let q = Pencil::char_pencil(&RMat::from_ints(&[&[1, 1], &[0, 1]])).unwrap();
        assert!(q.is_monic());
        assert_eq!(
            q.det().unwrap(),
            UPoly::new(vec![Rat::from_int(1), Rat::from_int(-2), Rat::from_int(1)])
        );
    }
}
