use thiserror::Error;

/// Errors surfaced by the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("prime must be an odd prime, got {0}")]
    InvalidPrime(u64),
    #[error("group order {order} exceeds the size cap {cap}")]
    SizeCap { order: u64, cap: u64 },
    #[error("not a valid group table: {0}")]
    NotAGroup(String),
    #[error("element set is not a subgroup")]
    NotASubgroup,
    #[error("subgroup is not normal in the given overgroup")]
    NotNormal,
    #[error("subgroup/section arguments are incompatible: {0}")]
    BadSection(String),
    #[error("matrix dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("pattern count exceeds cap {cap}")]
    PatternCap { cap: usize },
    #[error("unsupported parameter: {0}")]
    Unsupported(String),
    #[error("edge function is not a valid invariant 1-cocycle: {0}")]
    InvalidCocycle(String),
    #[error("invalid gluing data: {0}")]
    InvalidGluingData(String),
    #[error("section vector violates the image conditions: {0}")]
    ConditionsViolated(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
