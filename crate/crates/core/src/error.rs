use thiserror::Error;

/// Errors raised by the library. Budget refusals are kept apart from input
/// errors so that callers (the CLI in particular) can report them distinctly.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("subspaces are not nested: {0}")]
    NotNested(String),

    #[error("budget exceeded for {what}: needs {needed}, cap is {cap}")]
    BudgetExceeded { what: String, needed: String, cap: String },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("property is trivial: {0}")]
    TrivialProperty(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn budget(what: impl Into<String>, needed: impl ToString, cap: impl ToString) -> Self {
        Error::BudgetExceeded {
            what: what.into(),
            needed: needed.to_string(),
            cap: cap.to_string(),
        }
    }

    pub fn is_budget(&self) -> bool {
        matches!(self, Error::BudgetExceeded { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
