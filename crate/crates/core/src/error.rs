use thiserror::Error;

/// Errors raised by the arithmetic kernels, the group layer and the harness.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid context: {0}")]
    InvalidContext(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("element is not a unit: {0}")]
    NotAUnit(String),
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("Laurent capacity exceeded: degree {degree} below {capacity}")]
    CapacityExceeded { degree: i64, capacity: i64 },
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("ring tag mismatch")]
    RingTagMismatch,
    #[error("series did not terminate after {0} iterations")]
    IterationCap(usize),
    #[error("integrality failure: {0}")]
    Integrality(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
