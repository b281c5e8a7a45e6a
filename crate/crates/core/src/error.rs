use thiserror::Error;

use crate::Vertex;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("N_max must be at least 3, got {0}")]
    MaxCardinalityTooSmall(usize),

    #[error("density threshold must be positive and finite, got {0}")]
    InvalidThreshold(f64),

    #[error("delta_it {value} outside the valid range (0, {upper})")]
    DeltaItOutOfRange { value: f64, upper: f64 },

    #[error("expected {expected} explicit thresholds (T_2..T_N_max), got {got}")]
    ThresholdCount { expected: usize, got: usize },

    #[error("explicit thresholds must end at T = {threshold}, got T_N_max = {last}")]
    ThresholdEndpoint { threshold: f64, last: f64 },

    #[error("T_n * g_n must be strictly increasing, violated at n = {0}")]
    ThresholdsNotIncreasing(usize),

    #[error("cardinality {n} outside [{min}, {max}]")]
    CardinalityOutOfRange { n: usize, min: usize, max: usize },

    #[error("negative score {0}")]
    NegativeScore(f64),

    #[error("self-loop update on vertex {0}")]
    SelfLoop(Vertex),

    #[error("vertex {vertex} outside universe 1..={universe}")]
    VertexOutOfRange { vertex: Vertex, universe: Vertex },

    #[error("update drives weight of ({a}, {b}) to {weight}")]
    NegativeWeight { a: Vertex, b: Vertex, weight: f64 },

    #[error("non-finite update delta {0}")]
    NonFiniteDelta(f64),

    #[error("subgraph {0:?} is not dense under the current thresholds")]
    SparseInsert(Vec<Vertex>),

    #[error("subgraph {0:?} is not indexed")]
    NotIndexed(Vec<Vertex>),

    #[error("vertex set {0:?} must be sorted, duplicate-free and contain only real vertices")]
    MalformedSet(Vec<Vertex>),

    #[error("cannot star-mark a subgraph of cardinality N_max")]
    StarAtMaxCardinality,

    #[error("subgraph {0:?} has no star entry")]
    NoStar(Vec<Vertex>),

    #[error("oracle limit exceeded: {0}")]
    OracleLimit(String),

    #[error("oracle strategies disagree: {0}")]
    OracleDisagreement(String),

    #[error("time went backwards: {now} < {last}")]
    TimeRegression { now: f64, last: f64 },

    #[error("invalid workload spec: {0}")]
    InvalidWorkload(String),

    #[error("diversity penalty must lie in [0, 1], got {0}")]
    InvalidPenalty(f64),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("{0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}
