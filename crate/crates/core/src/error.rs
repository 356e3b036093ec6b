use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid exponent: {0}")]
    InvalidExponent(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("budget exceeded: {what} needs {needed}, budget is {budget}")]
    BudgetExceeded {
        what: &'static str,
        needed: String,
        budget: u64,
    },

    #[error("non-finite coefficient at {0}")]
    NonFinite(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("series is not normalized: estimated sup-norm {0} exceeds 1")]
    Unnormalized(f64),
}

impl Error {
    pub(crate) fn pre(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    /// True for errors caused by an exhausted item/time budget rather than bad input.
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::BudgetExceeded { .. })
    }
}
