use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("ambient rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("construction error: {0}")]
    Construction(String),
    #[error("uncertified inverted element: {0}")]
    Uncertified(String),
    #[error("not supported by the module backend: {0}")]
    Unsupported(String),
    #[error("index out of range: {0}")]
    Index(String),
    #[error("size cap exceeded: {0}")]
    SizeCap(String),
    #[error("degree {0} lies outside the window {1}..{2}")]
    Window(i64, i64, i64),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn precondition<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Precondition(msg.into()))
}

pub(crate) fn construction<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Construction(msg.into()))
}
