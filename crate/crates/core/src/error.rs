use std::io;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A row could not be parsed. Line numbers are 1-based and count the header.
    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },

    /// A row parsed but broke a data invariant (duplicate minute, bid > ask, ...).
    #[error("line {line}: {message}")]
    Validation { line: u64, message: String },

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("requested {requested} days but only {pool} are eligible")]
    Capacity { pool: usize, requested: usize },

    #[error("no usable input: {0}")]
    EmptyInput(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Error {
    pub(crate) fn argument(msg: impl Into<String>) -> Self {
        Error::Argument(msg.into())
    }

    /// Argument errors are caller mistakes; everything else is a data problem.
    pub fn is_usage(&self) -> bool {
        matches!(self, Error::Argument(_))
    }
}
