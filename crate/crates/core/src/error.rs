use thiserror::Error;

use crate::group::GroupId;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("group mismatch: expected {expected}, found {found}")]
    GroupMismatch { expected: GroupId, found: GroupId },

    #[error("unsupported operation: {0}")]
    Unsupported(String),

    #[error("window too small: {0}")]
    InsufficientWindow(String),

    #[error("internal consistency check failed: {0}")]
    Consistency(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn unsupported(msg: impl Into<String>) -> Self {
        Error::Unsupported(msg.into())
    }
}

pub(crate) fn ensure_same_group(expected: GroupId, found: GroupId) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::GroupMismatch { expected, found })
    }
}
