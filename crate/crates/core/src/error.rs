use thiserror::Error;

/// Errors raised by the library. Property violations (a failed packing check,
/// a digraph outside a family) are reported through return values instead.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("loop at vertex {0}")]
    Loop(usize),
    #[error("arc ({u}, {v}) has an endpoint outside 0..{n}")]
    VertexOutOfRange { u: usize, v: usize, n: usize },
    #[error("order {n} exceeds the supported maximum {max}")]
    OrderTooLarge { n: usize, max: usize },
    #[error("digraph must have at least one vertex")]
    EmptyDigraph,
    #[error("arc ({0}, {1}) is not in the digraph")]
    MissingArc(usize, usize),
    #[error("vertex set must be non-empty")]
    EmptyVertexSet,
    #[error("vertex {0} listed twice")]
    DuplicateVertex(usize),
    #[error("invalid Steiner instance: {0}")]
    InvalidInstance(String),
    #[error("parameter out of range: {0}")]
    OutOfRange(String),
    #[error("invalid cycle partition: {0}")]
    InvalidPartition(String),
    #[error("digraph does not match the cycle partition")]
    PartitionMismatch,
    #[error("{0}")]
    Impossible(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
