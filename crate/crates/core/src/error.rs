use thiserror::Error;

/// Errors raised by the library. Budgets are explicit so that enumeration
/// never silently truncates.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("value out of domain: {0}")]
    Domain(String),

    #[error("matrix restricted to the chosen positions is rank deficient")]
    RankDeficient,

    #[error("enumeration budget exceeded for {what}: needs {needed}, budget {budget}")]
    BudgetExceeded {
        what: &'static str,
        needed: String,
        budget: String,
    },

    #[error("auxiliary codeword is not in the row space of its generator")]
    InconsistentAux,

    #[error("sample set is empty")]
    EmptySamples,

    #[error("malformed sample file: {0}")]
    Format(String),

    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}

pub(crate) fn budget(what: &'static str, needed: impl ToString, budget: impl ToString) -> Error {
    Error::BudgetExceeded {
        what,
        needed: needed.to_string(),
        budget: budget.to_string(),
    }
}
