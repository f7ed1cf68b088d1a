use thiserror::Error;

/// Errors that are not verdicts: malformed input, internal boundary
/// mismatches, and exhausted search budgets.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("input error: {0}")]
    Input(String),
    #[error("boundary mismatch: {0}")]
    Boundary(String),
    #[error("not invertible: {0}")]
    NotInvertible(String),
    #[error("search cap exceeded: {0}")]
    CapExceeded(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn is_cap(&self) -> bool {
        matches!(self, Error::CapExceeded(_))
    }
}
