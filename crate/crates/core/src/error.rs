use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A caller-supplied argument is malformed or out of range.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    /// The request is well-formed but exceeds a configured size cap.
    #[error("unsupported: {0}")]
    Unsupported(String),
    /// An input violates a documented precondition.
    #[error("precondition failed: {0}")]
    Precondition(String),
    /// The cone contains a line; `direction` spans it.
    #[error("cone is not pointed; it contains the line spanned by [{}]", direction.join(", "))]
    NotPointed { direction: Vec<String> },
    /// Text or JSON input could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),
    /// Vector and cone dimensions disagree.
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}

pub(crate) fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}
