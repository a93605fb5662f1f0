use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("integer overflow in exact arithmetic")]
    Overflow,
    #[error("wrong matrix shape: expected {expected}, got {got}")]
    Shape { expected: String, got: String },
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("quotient group is infinite (column span does not have full rank)")]
    InfiniteQuotient,
    #[error("size cap exceeded: {0}")]
    CapExceeded(String),
    #[error("graph has loops; not properly colorable")]
    Loops,
    #[error("internal cross-check failed: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
