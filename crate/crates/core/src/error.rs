use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("duplicate variable `{0}`")]
    DuplicateVariable(String),

    #[error("variable `{0}` has cardinality 0")]
    ZeroCardinality(String),

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("negative entry {value} at row {row}, column {col}")]
    NegativeEntry { row: usize, col: usize, value: f64 },

    #[error("column {col} sums to {sum}, not 1")]
    NotStochastic { col: usize, sum: f64 },

    #[error("entry count {found} does not match shape {rows}x{cols}")]
    ShapeMismatch {
        rows: usize,
        cols: usize,
        found: usize,
    },

    #[error("no full support: zero entry at index {index}")]
    NoFullSupport { index: usize },

    #[error("self-loop on `{0}`")]
    SelfLoop(String),

    #[error("CycleDetected: edges form a cycle through {0:?}")]
    CycleDetected(Vec<String>),

    #[error("not semi-Markovian: latent `{latent}` {reason}")]
    NotSemiMarkovian { latent: String, reason: String },

    #[error("target `{0}` is latent")]
    TargetLatent(String),

    #[error("target `{0}` is already cut")]
    TargetAlreadyCut(String),

    #[error("intervention on `{target}` is not identifiable (witness `{witness}`: {reason})")]
    NotIdentifiable {
        target: String,
        witness: String,
        reason: String,
    },

    #[error("grouping mismatch: {0}")]
    GroupingMismatch(String),

    #[error("invalid model: {0:?}")]
    InvalidModel(Vec<crate::semantics::Violation>),

    #[error("live joint of {size} states exceeds cap {cap}")]
    DimensionOverflow { size: usize, cap: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
