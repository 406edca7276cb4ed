use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is not square: {0}x{1}")]
    NotSquare(usize, usize),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("resource limit exceeded: {what} = {value} (limit {limit})")]
    Resource {
        what: &'static str,
        value: usize,
        limit: usize,
    },

    #[error("construction failed: {0}")]
    Construction(String),

    #[error("decode failed: {0}")]
    Decode(String),

    #[error("scheme failed certification: {0}")]
    Uncertified(String),

    #[error("malformed input: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, got })
    }
}
