use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("tree has no nodes")]
    EmptyTree,
    #[error("parent links contain a cycle through node `{0}`")]
    CycleDetected(String),
    #[error("multiple roots: `{first}` and `{second}` have no parent")]
    MultipleRoots { first: String, second: String },
    #[error("node `{node}` refers to unknown parent `{parent}`")]
    OrphanNode { node: String, parent: String },
    #[error("label `{0}` appears more than once")]
    DuplicateLabel(String),
    #[error("nodes are not in descending order of height at index {0}")]
    NotHeightOrdered(usize),
    #[error("k = {k} must be smaller than the tree height {height}")]
    KTooLarge { k: usize, height: usize },
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("invalid mapping: {0}")]
    InvalidMapping(String),
    #[error("weight at index {0} is zero")]
    ZeroWeight(usize),
    #[error("weight at index {0} is not strictly positive")]
    NonPositiveWeight(usize),
    #[error("index {index} out of range for size {size}")]
    IndexOutOfRange { index: usize, size: usize },
    #[error("eigenvector for node {node} is not guaranteed: node {conflict} has the same weight")]
    EigenvectorNotGuaranteed { node: usize, conflict: usize },
    #[error("selected rows of column {0} are all zero")]
    ZeroPivotColumn(usize),
    #[error("matrix is rank deficient at column {0}")]
    RankDeficient(usize),
    #[error("epsilon must be positive, got {0}")]
    NonPositiveEpsilon(f64),
    #[error("size {n} exceeds the dense cap {cap}")]
    SizeCapExceeded { n: usize, cap: usize },
    #[error("{q} range queries requested but only {available} distinct ranges exist")]
    QTooLarge { q: usize, available: usize },
    #[error("invalid parameter: {0}")]
    InvalidParam(String),
    #[error("parse error at line {line}: {reason}")]
    Parse { line: u64, reason: String },
    #[error("inconsistent leaf set: {0}")]
    InconsistentLeafSet(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
