use thiserror::Error;

/// Errors raised by the numerical kernels.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("horizon mismatch: {left} vs {right}")]
    HorizonMismatch { left: f64, right: f64 },

    #[error("invalid step function: {0}")]
    InvalidStepFunction(String),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("matrix is not Hermitian (defect {defect:e})")]
    NotHermitian { defect: f64 },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("zero vector")]
    ZeroVector,

    #[error("eigendecomposition failed to converge")]
    Eigen,

    #[error("grid alignment: {0}")]
    Alignment(String),

    #[error("coherent truncation: tail mass {tail:e} exceeds {limit:e} at N = {dim}")]
    TailMass { tail: f64, limit: f64, dim: usize },

    #[error("chaos order {order} above truncation order {max}")]
    ChaosOrder { order: usize, max: usize },

    #[error("missing input: {0}")]
    MissingInput(String),

    #[error("artifact: {0}")]
    Artifact(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
