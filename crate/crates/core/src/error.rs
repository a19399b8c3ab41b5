use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("p = {0} is not an odd prime")]
    InvalidPrime(u64),

    #[error("target precision must be at least 1")]
    InvalidPrecision,

    #[error("division by zero")]
    DivisionByZero,

    #[error("p-adic operands come from different contexts")]
    ContextMismatch,

    #[error("{0} is not a p-adic unit")]
    NotAUnit(String),

    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),

    #[error("character of order {order} has no values in Z_{p} (order must divide {p} - 1)")]
    NotEmbeddable { order: u64, p: u64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("no stabilization mod {p}^{precision} up to level {max_level}")]
    NonConvergence {
        p: u64,
        precision: u32,
        max_level: u32,
    },

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
