use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("non-finite entry at position {0}")]
    NonFinite(usize),

    #[error("negative entry {value} at ({row}, {col})")]
    NegativeEntry { row: usize, col: usize, value: f64 },

    #[error("input must be strictly positive: {0}")]
    NotPositive(String),

    #[error("power iteration did not converge after {iterations} iterations (best estimate {estimate}, bracket width {gap})")]
    NoConvergence {
        iterations: usize,
        estimate: f64,
        gap: f64,
    },

    #[error("size guard exceeded: {required} elements required, guard is {guard}")]
    GuardExceeded { required: u128, guard: u128 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("empty set")]
    EmptySet,

    #[error("chain is not ordered: matrix {index} is not entrywise <= matrix {next}")]
    ChainOrder { index: usize, next: usize },

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("candidate is not a member of the set")]
    NotMember,

    #[error("spectral simplex exceeded {0} iterations")]
    IterationLimit(usize),
}
