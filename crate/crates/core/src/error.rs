use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid hypergraph: {0}")]
    InvalidHypergraph(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("precondition not met: {0}")]
    Precondition(String),

    /// An exhaustive enumeration would exceed its configured cap.
    #[error("enumeration guard exceeded: {0}")]
    GuardExceeded(String),

    #[error("gave up after {tries} attempts: {what}")]
    GaveUp { what: String, tries: u64 },

    #[error("invalid design: {0}")]
    InvalidDesign(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}
