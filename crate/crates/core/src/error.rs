use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix entries must be finite")]
    NonFinite,
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("matrix is not Hermitian (deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },
    #[error("iteration failed to converge: {0}")]
    NoConvergence(&'static str),
    #[error("spectrum has a significant negative eigenvalue ({0:.3e})")]
    NegativeSpectrum(f64),
    #[error("point lies outside the space's domain")]
    OutOfDomain,
    #[error("arity mismatch: {0}")]
    ArityMismatch(String),
    #[error("dimension mismatch: operator dim {op} vs space dim {space}")]
    DimMismatch { op: usize, space: usize },
    #[error("invalid exponent: {0}")]
    BadExponent(String),
    #[error("contraction bound violated: {0}")]
    ContractionRequired(String),
    #[error("invalid f,g pair `{label}`: {reason}")]
    InvalidPair { label: String, reason: String },
    #[error("invalid instance spec: {0}")]
    BadSpec(String),
    #[error("unknown checker `{0}`")]
    UnknownChecker(String),
}

pub type Result<T> = std::result::Result<T, Error>;
