//! Crate-wide error type.

use thiserror::Error;

/// Errors reported by every module of the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("no exact rational value for {base}^({exp})")]
    NonRationalPower { base: String, exp: String },
    #[error("matrix is singular")]
    Singular,
    #[error("matrix is not symplectic (residual {0:e})")]
    NonSymplectic(f64),
    #[error("matrix is not of the form sigma(t)")]
    NotInSpan,
    #[error("matrix is not Hamiltonian")]
    NotHamiltonian,
    #[error("ill-conditioned input: {0}")]
    IllConditioned(String),
    #[error("unsupported configuration: {0}")]
    Unsupported(String),
    #[error("group kind mismatch: {0}")]
    KindMismatch(String),
    #[error("outside the domain: {0}")]
    DomainError(String),
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    #[error("grid too coarse: {0}")]
    GridTooCoarse(String),
    #[error("atom carries mass within one cell of the singular hyperplane")]
    SingularSupport,
    #[error("not a frame on the test band (lower bound {lower:e}, upper bound {upper:e})")]
    NotAFrame { lower: f64, upper: f64 },
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
