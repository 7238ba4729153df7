use thiserror::Error;

/// Errors raised by the exact and p-adic pipelines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("pole at t = {0}")]
    Pole(String),

    #[error("construction error: {0}")]
    Construction(String),

    #[error("hypothesis not satisfied: {0}")]
    Hypothesis(String),

    /// A truncated sum or series could not certify the requested number of
    /// p-adic digits.
    #[error("precision shortfall: requested {requested} digits, certified {certified}")]
    PrecisionShortfall { requested: i64, certified: i64 },

    #[error("evaluation failed at k = {k}: {reason}")]
    Evaluation { k: u64, reason: String },

    #[error("N = {0} is not an admissible index for these parameters")]
    NotAdmissible(u32),

    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}
