use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("index out of bounds: {0}")]
    Bounds(String),
    #[error("size mismatch: {0}")]
    SizeMismatch(String),
    #[error("unknown label `{0}`")]
    UnknownLabel(String),
    #[error("contract violation: {0}")]
    Contract(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("line {line}: {msg}")]
    Format { line: usize, msg: String },
    #[error("oracle budget exceeded: {0}")]
    Budget(String),
    #[error("representation degenerate after retries: {0}")]
    Degenerate(String),
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
