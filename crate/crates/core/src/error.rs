use thiserror::Error;

/// Errors raised by the exact linear algebra and factorization pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("zero input where a nonzero value is required")]
    ZeroInput,
    #[error("duplicate abscissa in interpolation")]
    DuplicateAbscissa,
    #[error("polynomial does not have integer coefficients")]
    NonIntegerCoefficients,
    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("index out of range")]
    IndexOutOfRange,
    #[error("matrix is not a unit")]
    NotAUnit,
    #[error("matrix is not full (determinant is zero)")]
    Singular,
    #[error("matrix is a unit, nothing to factor")]
    UnitInput,
    #[error("matrix has an entry of degree > 1 where a linear matrix is required")]
    NotLinear,
    #[error("pencil is already monic")]
    AlreadyMonic,
    #[error("matrix relation C*U = 0 does not hold")]
    RelationDoesNotHold,
    #[error("bad prime {p}: {reason}")]
    BadPrime { p: u64, reason: String },
    #[error("internal invariant violated: {0}")]
    InvariantViolation(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
