use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid space specification: {0}")]
    InvalidSpec(String),

    #[error("operation requires rational coefficients, but space `{0}` has irrational levels")]
    IrrationalTheta(String),

    #[error("vector support {index} lies outside the window [1, {window}]")]
    OutsideWindow { index: usize, window: usize },

    #[error("budget exceeded: {what} reached {count} (limit {limit})")]
    BudgetExceeded {
        what: &'static str,
        count: usize,
        limit: usize,
    },

    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),

    #[error("internal consistency failure: {0}")]
    Inconsistent(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
