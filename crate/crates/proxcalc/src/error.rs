//! Error type shared by all solver and oracle entry points.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProxError {
    #[error("non-finite entry at coordinate {index}: {value}")]
    NonFiniteEntry { index: usize, value: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("prox step must be positive, got {0}")]
    NonPositiveStep(f64),

    #[error("invalid catalog spec: {0}")]
    InvalidSpec(String),

    #[error("function value is +inf at its own prox output (inconsistent prox)")]
    InfiniteValue,

    #[error("domain boxes of f and g do not intersect")]
    EmptyDomainIntersection,

    #[error("additivity condition unverified: {0}")]
    AdditivityUnverified(String),

    #[error("fixed-point iteration did not converge within the iteration budget")]
    MaxIterExceeded,

    #[error("1D subdifferential is required but not provided by `{0}`")]
    MissingSubdifferential(String),

    #[error("gradient is required but not provided by `{0}`")]
    MissingGradient(String),

    #[error("Hessian action is required but not provided by `{0}`")]
    HessianMissing(String),

    #[error("no finite objective value found on the search grid")]
    UnboundedSearch,

    #[error("slope expression has a pole at gamma = -1")]
    PoleAtMinusOne,

    #[error("internal invariant violated: {0}")]
    InternalError(String),
}

pub type Result<T> = std::result::Result<T, ProxError>;
