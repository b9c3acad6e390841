//! Exact factorization of square matrices over Q[x] into atoms.
//!
//! The pipeline linearizes a polynomial matrix to a linear pencil, reduces
//! the pencil to a monic one, factors the monic pencil into linear atoms
//! through primary decomposition, and extracts polynomial atom factors of
//! the original matrix, all over exact rational arithmetic.

pub mod error;
pub mod extract;
pub mod generator;
pub mod higman;
pub mod pencil;
pub mod pencilfactor;
pub mod pmat;
pub mod rat;
pub mod rmat;
pub mod trivialize;
pub mod unifactor;
pub mod upoly;

pub use error::{Error, Result};
pub use extract::{
    AtomCertificate, AtomFactorization, StageTelemetry, VerifyClause, VerifyReport,
    factor_matrix, verify_factorization,
};
pub use generator::{GenLimits, GeneratedInstance, generate};
pub use higman::HigmanOutcome;
pub use pencil::Pencil;
pub use pencilfactor::{LayerBasis, MonicOutcome, PencilFactorization, PrimaryComponent, Side};
pub use pmat::{ColOps, PMat, ScalarRowOps};
pub use rat::Rat;
pub use rmat::RMat;
pub use trivialize::{TNormalForm, TrivOutcome};
pub use unifactor::IrreducibleFactorization;
pub use upoly::UPoly;
