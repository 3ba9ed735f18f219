use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A model or configuration parameter violates one of its invariants.
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error(
        "length mismatch: status has {status} entries but the pooling strategy has {strategy}"
    )]
    LengthMismatch { status: usize, strategy: usize },

    #[error("node {node} out of range for a graph with {n} nodes")]
    NodeOutOfRange { node: usize, n: usize },

    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },

    #[error("graph too large for a dense sampled graph: {n} nodes (limit {limit})")]
    Capacity { n: usize, limit: usize },

    #[error("{0}")]
    EmptyGraph(String),

    /// A named dataset file is not present locally.
    #[error("dataset `{name}` not found at {}: {hint}", path.display())]
    DataMissing {
        name: String,
        path: PathBuf,
        hint: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
