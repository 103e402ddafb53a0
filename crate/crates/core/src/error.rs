//! Error type shared by every module of the crate.

use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("zero denominator")]
    ZeroDenominator,

    #[error("indeterminate roots: the zero polynomial vanishes everywhere")]
    IndeterminateRoots,

    #[error("matrix is identically singular; null vector {null_vector}")]
    SingularMatrix { null_vector: String },

    #[error("evaluation at {point} hits a pole near {pole}")]
    EvalAtPole { point: Complex64, pole: Complex64 },

    #[error("identically singular: det vanishes identically")]
    IdenticallySingular,

    #[error("{point} is not a pole of the function")]
    NotAPole { point: Complex64 },

    #[error("{point} is not a zero of the function")]
    NotAZero { point: Complex64 },

    #[error("pole at the origin; factorization requires det F(0) to be defined and nonzero")]
    PoleAtOrigin,

    #[error("det F(0) = 0; factorization requires det F(0) != 0")]
    SingularAtOrigin,

    #[error("matrix is singular at the requested point {point}")]
    SingularAtPoint { point: Complex64 },

    #[error("result is not entire: entry ({row},{col}) keeps denominator {den}")]
    NonPolynomialResult { row: usize, col: usize, den: String },

    #[error("zero vector is not admissible here")]
    ZeroVector,

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("operation requires float mode: {0}")]
    RequiresFloatMode(String),

    #[error("not representable: {0}")]
    NotRepresentable(String),

    #[error("sampling failed after {tries} tries ({params})")]
    SamplingFailed { tries: usize, params: String },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    pub fn dim(msg: impl Into<String>) -> Self {
        Error::DimensionMismatch(msg.into())
    }

    pub fn pre(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }
}
