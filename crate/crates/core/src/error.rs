use thiserror::Error;

/// Errors shared by every solver and parser in the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PddError {
    /// An input refers to something outside the instance, such as an unknown taxon.
    #[error("domain error: {0}")]
    Domain(String),
    /// A solver was called on an instance that does not meet its preconditions.
    #[error("precondition violated: {0}")]
    Precondition(String),
    /// The requested computation exceeds a configured budget. Never a wrong answer.
    #[error("refused: {0}")]
    Refusal(String),
    /// Malformed input text.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    /// A weight or diversity computation left the 64-bit range.
    #[error("arithmetic overflow: {0}")]
    Overflow(String),
}

pub type Result<T> = std::result::Result<T, PddError>;

pub(crate) fn precondition<T>(msg: impl Into<String>) -> Result<T> {
    Err(PddError::Precondition(msg.into()))
}

pub(crate) fn refuse<T>(msg: impl Into<String>) -> Result<T> {
    Err(PddError::Refusal(msg.into()))
}
