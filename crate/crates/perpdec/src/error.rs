use thiserror::Error;

/// Errors raised by the library. The CLI maps each variant to an exit code
/// through [`Error::kind`].
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid field size {0}: expected an odd prime below 2^31")]
    InvalidField(u64),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("map is degenerate: radical has dimension {0}")]
    Degenerate(usize),
    #[error("grams are not linearly independent (map is not full)")]
    NotFull,
    #[error("element does not lie in the algebra")]
    NotInAlgebra,
    #[error("element is singular")]
    Singular,
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// Coarse classification used for process exit codes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorKind {
    Input,
    Verification,
    Budget,
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Verification(_) | Error::Internal(_) => ErrorKind::Verification,
            Error::Budget(_) => ErrorKind::Budget,
            _ => ErrorKind::Input,
        }
    }

    pub(crate) fn dim(msg: impl Into<String>) -> Self {
        Error::Dimension(msg.into())
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }

    pub(crate) fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
