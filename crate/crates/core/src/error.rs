use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("scalar kind mismatch: {0}")]
    ScalarKindMismatch(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("exact (rational) input required, got {0} entries")]
    NotExact(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("value out of range: {0}")]
    OutOfRange(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("budget exceeded: {0}")]
    Budget(String),

    #[error("graph has no cycle")]
    Acyclic,

    #[error("sample window too short: {0}")]
    WindowTooShort(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
