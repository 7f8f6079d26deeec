use thiserror::Error;

/// Crate-wide error type. Every fallible contract in the library reports
/// through one of these variants so callers can match on failure class
/// rather than on message text.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix not positive definite: lambda_min = {lambda_min:e} with tolerance {tol:e}")]
    NotPositiveDefinite { lambda_min: f64, tol: f64 },

    #[error("non-finite value: {0}")]
    NonFinite(String),

    #[error("family kind mismatch: {0}")]
    KindMismatch(String),

    #[error("argument outside domain: {0}")]
    Domain(String),

    #[error("threshold outside the admissible range for this side: {0}")]
    SideDomain(String),

    #[error("theta = {theta} outside mgf domain ({lo}, {hi})")]
    ThetaOutOfDomain { theta: f64, lo: f64, hi: f64 },

    #[error("empty optimization domain: {0}")]
    EmptyDomain(String),

    #[error("invalid ensemble spec: {0}")]
    SpecInvalid(String),

    #[error("joint support has {size} outcomes, cap is {cap}")]
    SupportTooLarge { size: u128, cap: u64 },

    #[error("ensemble has no finite support to enumerate")]
    NotEnumerable,

    #[error("too many summands: {n} exceeds cap {cap}")]
    TooManySummands { n: usize, cap: usize },

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
