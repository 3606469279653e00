use thiserror::Error;

/// Failures raised by the library. Negative mathematical answers are never
/// errors; they come back as ordinary values.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed input text (presentation files, words, rationals).
    #[error("parse error: {0}")]
    Parse(String),
    /// Arguments that violate an operation's preconditions.
    #[error("usage error: {0}")]
    Usage(String),
    /// A bracket left the degree window under the reject policy.
    #[error("truncation overflow: {0}")]
    Overflow(String),
    /// An internal consistency check failed.
    #[error("invariant breach: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }

    pub fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }

    pub fn overflow(msg: impl Into<String>) -> Self {
        Error::Overflow(msg.into())
    }

    pub fn invariant(msg: impl Into<String>) -> Self {
        Error::Invariant(msg.into())
    }
}
