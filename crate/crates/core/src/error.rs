use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("index {index} is below the domain start {start}")]
    IndexBelowDomainStart { index: u64, start: u64 },
    #[error("division by an interval containing zero")]
    DivisionByIntervalContainingZero,
    #[error("logarithm of a non-positive argument")]
    NonPositiveArgument,
    #[error("check requires A^2 - 4B = 1")]
    NotDeltaOneCase,
    #[error("x must be positive")]
    NonPositiveX,
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
