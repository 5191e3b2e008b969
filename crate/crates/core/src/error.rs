use thiserror::Error;

/// Errors raised while building or reading trees and patterns.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {{{0}, {1}}}")]
    DuplicateEdge(usize, usize),
    #[error("vertex {vertex} out of range 1..={n}")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("expected {expected} edges, got {got}")]
    WrongEdgeCount { expected: usize, got: usize },
    #[error("edge set is not connected")]
    Disconnected,
    #[error("a tree needs at least one vertex")]
    Empty,
    #[error("Prüfer codec needs n >= 2, got n = {0}")]
    TooSmall(usize),
    #[error("Prüfer sequence for n = {n} must have length {expected}, got {got}")]
    SequenceLength { n: usize, expected: usize, got: usize },
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// Errors from pattern construction and occurrence checks.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PatternError {
    #[error("patterns need at least two vertices (p >= 1)")]
    PatternTooSmall,
    #[error("vertex {vertex} out of range 1..={n}")]
    IndexOutOfRange { vertex: usize, n: usize },
    #[error("occurrence repeats vertex {0}")]
    DuplicateVertices(usize),
    #[error("occurrence has {got} non-root vertices, pattern needs {expected}")]
    WrongSize { expected: usize, got: usize },
    #[error("unknown pattern name `{0}`")]
    UnknownName(String),
    #[error(transparent)]
    Tree(#[from] TreeError),
}

/// Errors from the closed-form moment evaluations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MomentError {
    #[error("n = {n} is below the formula's domain (needs n >= {min})")]
    DomainTooSmall { n: usize, min: usize },
    #[error("expected pattern count is zero")]
    ZeroMean,
}

/// Errors from exhaustive enumeration.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("n = {n} exceeds the enumeration cap {cap}")]
    CapExceeded { n: usize, cap: usize },
    #[error("enumeration needs n >= 2, got {0}")]
    TooSmall(usize),
    #[error(transparent)]
    Moment(#[from] MomentError),
}

/// Invalid Monte Carlo requests.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum McError {
    #[error("at least one sample is required")]
    NoSamples,
    #[error("host trees need n >= {min} vertices, got {n}")]
    HostTooSmall { n: usize, min: usize },
    #[error("n list must be non-empty and strictly ascending")]
    UnsortedSizes,
}
