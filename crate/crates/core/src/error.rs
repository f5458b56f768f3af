use thiserror::Error;

use crate::game::SubsetIndex;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Table dimensions or alphabets do not line up.
    #[error("shape error: {0}")]
    Shape(String),

    #[error("invalid argument: {0}")]
    Argument(String),

    /// A document is not well-formed JSON of the expected shape.
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },

    /// A configured size cap would be exceeded.
    #[error("{what} needs {required} entries, above the configured cap of {cap}")]
    Resource { what: &'static str, required: u128, cap: u128 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    /// An approximation certificate does not hold for the data it accompanies.
    #[error("certificate for subset {subset} violated: distance {actual} exceeds {claimed}")]
    Certificate { subset: SubsetIndex, claimed: String, actual: String },

    /// The solver produced a witness that does not verify. Always a bug.
    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn shape(msg: impl Into<String>) -> Self {
        Error::Shape(msg.into())
    }

    pub(crate) fn argument(msg: impl Into<String>) -> Self {
        Error::Argument(msg.into())
    }
}
