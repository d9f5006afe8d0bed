use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("integer overflow while computing {0}")]
    Overflow(&'static str),

    #[error("element {element} does not belong to {group}")]
    GroupMismatch { element: String, group: String },

    #[error("enumeration budget exceeded: {required} candidates, budget {budget}")]
    BudgetExceeded { required: u128, budget: u128 },

    #[error("{k} exceeds the factorization limit {limit}")]
    FactorizationLimit { k: u64, limit: u64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("malformed row {line}: {reason}")]
    MalformedRow { line: usize, reason: String },

    #[error("invalid checkpoint: {0}")]
    Checkpoint(String),

    #[error("no optimal planar embedding found for k = {0}")]
    ConstructionFailed(u64),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
