use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("size limit exceeded: {what} needs {needed}, cap is {cap}")]
    SizeLimit {
        what: String,
        needed: u128,
        cap: u128,
    },
    #[error("graph is disconnected: {reached} of {total} vertices reachable from the base vertex")]
    Disconnected { reached: usize, total: usize },
    #[error("validation failed: {0}")]
    Validation(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn arg<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Argument(msg.into()))
}
