use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("format error: {0}")]
    Format(String),
    #[error("invalid instance: {0}")]
    Invalid(String),
    #[error("trivially infeasible: equation {row} has no nonzero coefficient but right-hand side {rhs}")]
    TriviallyInfeasible { row: usize, rhs: String },
    #[error("solution is not exactly feasible: {0}")]
    NotExact(String),
    #[error("solution does not match the instance: {0}")]
    KeyMismatch(String),
    #[error("size guard exceeded: {0}")]
    SizeGuard(String),
    #[error("parameter out of range: {0}")]
    Range(String),
}

impl Error {
    pub fn format(msg: impl Into<String>) -> Self {
        Error::Format(msg.into())
    }
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
