use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument violated a documented precondition.
    #[error("invalid input: {0}")]
    InvalidInput(String),
    /// A space definition failed validation.
    #[error("invalid space: {0}")]
    InvalidSpace(String),
    /// A configuration could not be decoded into a network description.
    #[error("decode error: {0}")]
    Decode(String),
    /// The external worker violated the wire protocol or timed out.
    #[error("protocol error: {0}")]
    Protocol(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}
