use thiserror::Error;

use crate::graph::NodeId;

/// Errors raised by the simulator library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("description element {value} at position {index} is outside 0..=4")]
    InvalidDescription { index: usize, value: i64 },

    #[error("allowable error {0} is outside [0, 12]")]
    AllowableErrorOutOfRange(f64),

    #[error("hop limit must be at least 1")]
    ZeroHopLimit,

    #[error("invalid network configuration: {0}")]
    Configuration(String),

    #[error("node {0} does not exist in this network")]
    UnknownNode(NodeId),

    #[error("self-loop on node {0} is not allowed")]
    SelfLoop(NodeId),

    #[error("report contains no recorded outcomes")]
    EmptyReport,

    #[error("invalid value for `{key}`: {reason}")]
    Usage { key: String, reason: String },

    #[error("replication {replication}, {mode}, allowable error {level}: {source}")]
    Run {
        replication: usize,
        mode: &'static str,
        level: f64,
        source: Box<Error>,
    },

    #[error("malformed input at line {line}: {reason}")]
    Parse { line: usize, reason: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
