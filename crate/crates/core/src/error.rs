use thiserror::Error;

/// Errors raised by construction, verification and optimization routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("effects do not resolve the identity (deviation {deviation:e})")]
    InvalidPovm { deviation: f64 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("not a design: {0}")]
    NotADesign(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidArgument(msg.into()))
}
