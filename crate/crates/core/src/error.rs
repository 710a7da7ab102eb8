use std::io;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("graph has no edges")]
    EmptyGraph,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid seed: {0}")]
    InvalidSeed(String),

    #[error("conductance is undefined for {0}")]
    UndefinedSet(&'static str),

    #[error("vector has no nonzero entries")]
    EmptySupport,

    #[error("graph has {nodes} nodes, above the limit of {limit} for this solver")]
    SizeGuard { nodes: usize, limit: usize },

    #[error("event buffer exceeded {limit} events")]
    EventOverflow { limit: usize },

    #[error(transparent)]
    Io(#[from] io::Error),
}
