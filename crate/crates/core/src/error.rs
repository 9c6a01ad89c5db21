use thiserror::Error;

/// Errors produced by the library.
///
/// The variants map onto the CLI exit-code classes: everything except
/// [`Error::Resource`] and [`Error::Internal`] is a caller error.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected} variables, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("resource budget exceeded: {what} (bound {bound})")]
    Resource { what: String, bound: String },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub(crate) fn resource(what: impl Into<String>, bound: impl ToString) -> Self {
        Error::Resource {
            what: what.into(),
            bound: bound.to_string(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
