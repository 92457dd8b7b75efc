use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("empty point set: a polytope needs at least one point")]
    EmptyInput,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("ambient dimension {dim} exceeds the limit {limit} (raise it with RELUVOL_MAX_DIM)")]
    DimensionTooLarge { dim: usize, limit: usize },

    #[error("malformed number {text:?}: {reason}")]
    Parse { text: String, reason: String },

    #[error("{value} is not expressible as z/{base}^t")]
    NotNary { value: String, base: u64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("polytopes are not co-chartable: {0}")]
    NotCoChartable(String),

    #[error("Ehrhart interpolation inconsistency: {0}")]
    Interpolation(String),

    #[error("network error: {0}")]
    Network(String),

    #[error("{0}")]
    Precondition(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
