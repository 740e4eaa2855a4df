use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid problem: {0}")]
    InvalidProblem(String),

    #[error("index {index} out of range 1..={len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("invalid scheduling plan: {0}")]
    InvalidPlan(String),

    #[error("coalition must be non-empty")]
    EmptyCoalition,

    #[error("{what}: n = {n} exceeds the limit of {cap}")]
    CapExceeded { what: &'static str, n: usize, cap: usize },

    #[error("hypothesis does not hold: {0}")]
    Hypothesis(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
