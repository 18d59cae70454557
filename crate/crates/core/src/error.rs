use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("index out of range: {0}")]
    OutOfRange(String),
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("invalid argument: {0}")]
    Invalid(String),
    #[error("event {0} outside the support of the current law")]
    Support(String),
    #[error("consistency check failed: {0}")]
    Check(String),
    #[error("step guard of {0} steps exceeded")]
    StepGuard(u64),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("serialization: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
