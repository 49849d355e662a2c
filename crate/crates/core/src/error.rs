use std::fmt;

/// Errors produced anywhere in the toolkit.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("generator index {index} out of range for {strands} strands")]
    IndexOutOfRange { index: u32, strands: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("carrier mismatch: {0}")]
    CarrierMismatch(String),

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("search space exhausted after {searched} candidates")]
    Exhausted { searched: u64 },

    #[error("bound exceeded: {0}")]
    BoundExceeded(String),

    #[error("shared keys differ, so the context violates its distributive laws: {0}")]
    KeyMismatch(String),

    #[error("protocol violation: {0}")]
    Protocol(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(pos: usize, msg: impl fmt::Display) -> Self {
        Error::Parse {
            pos,
            msg: msg.to_string(),
        }
    }

    pub(crate) fn invalid(msg: impl fmt::Display) -> Self {
        Error::InvalidArgument(msg.to_string())
    }

    pub(crate) fn precondition(msg: impl fmt::Display) -> Self {
        Error::Precondition(msg.to_string())
    }
}
