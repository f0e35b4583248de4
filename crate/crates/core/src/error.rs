use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown tensor id {0}")]
    UnknownTensor(usize),

    #[error("tensor {0} appears in both contraction operands")]
    OverlappingOperands(usize),

    #[error("contraction operand is empty")]
    EmptyOperand,

    #[error("index {index} is open (its only endpoint is tensor {tensor})")]
    OpenIndex { index: usize, tensor: usize },

    #[error("index {index}: {reason}")]
    InvalidIndex { index: usize, reason: String },

    #[error("tensor {tensor}: {reason}")]
    InvalidValue { tensor: usize, reason: String },

    #[error("tensor {0} has no value block")]
    MissingValue(usize),

    #[error("malformed contraction tree: {0}")]
    MalformedTree(String),

    #[error("invalid ordering: {0}")]
    InvalidOrdering(String),

    #[error("ordering is empty")]
    EmptyOrdering,

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("{what} is {size}, limit is {limit}")]
    TooLarge {
        what: &'static str,
        size: usize,
        limit: usize,
    },

    #[error("contraction result still has open indices {0:?}")]
    OpenResult(Vec<usize>),

    #[error("infeasible spec: {0}")]
    Infeasible(String),

    #[error("schema violation: {0}")]
    Schema(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
