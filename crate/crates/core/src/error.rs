use std::io;

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("io error: {0}")]
    Io(#[from] io::Error),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid data: {0}")]
    Data(String),

    #[error("graph has no edges after filtering")]
    EmptyGraph,

    #[error("unknown vertex id {0}")]
    UnknownVertex(u64),

    #[error("invalid interval: {0}")]
    InvalidInterval(String),

    #[error("cannot remove the query vertex from a core subgraph")]
    RemoveQueryVertex,

    #[error("metric undefined: {0}")]
    UndefinedMetric(String),

    #[error("instance exceeds oracle caps: {0}")]
    OracleCapExceeded(String),
}

pub type Result<T> = std::result::Result<T, Error>;
