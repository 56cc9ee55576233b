use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("value {value} does not fit the 22-bit varbyte range")]
    Range { value: u64 },

    #[error("corrupt stream: {0}")]
    Corrupt(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("parse error on line {line}: {message}")]
    Parse { line: u64, message: String },

    #[error("node {node} has successor {successor}, but the graph only has {n} nodes")]
    Validation { node: u64, successor: u64, n: u64 },

    #[error("node {node} out of range for a graph of {n} nodes")]
    Index { node: u64, n: u64 },

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("format capacity exceeded: {0}")]
    Capacity(String),

    #[error("bad file format: {0}")]
    Format(String),

    #[error("bits per link is undefined for a graph without links")]
    UndefinedRatio,

    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Error {
    pub(crate) fn corrupt(msg: impl Into<String>) -> Self {
        Error::Corrupt(msg.into())
    }

    pub(crate) fn format(msg: impl Into<String>) -> Self {
        Error::Format(msg.into())
    }
}
