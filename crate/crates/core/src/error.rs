use alloc::string::String;
use alloc::vec::Vec;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("matrix order {0} is below the minimum of 2")]
    OrderTooSmall(usize),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not symmetric at ({row}, {col})")]
    NotSymmetric { row: usize, col: usize },

    #[error("rank {rank} outside the admissible range 1..={max}")]
    RankOutOfRange { rank: usize, max: usize },

    #[error("eigensolver did not converge after {iterations} iterations")]
    EigenNoConvergence { iterations: usize },

    #[error("centered matrix is zero; progress ratio is undefined")]
    DegenerateCentering,

    #[error("isotonic regression needs at least one target")]
    EmptyInput,

    #[error("weight at index {0} is not positive and finite")]
    NonPositiveWeight(usize),

    #[error("brute-force oracle is limited to {max} entries, got {len}")]
    OracleTooLarge { len: usize, max: usize },

    #[error("invalid ordinal chain: {0}")]
    InvalidChain(String),

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("relabeling search is limited to n <= {max}, got {n}")]
    TooManyPoints { n: usize, max: usize },

    #[error("construction precondition violated: {0}")]
    Construction(String),

    #[error("observation graph is disconnected: vertices {unreachable:?} cannot be reached from vertex {root}")]
    Disconnected { root: usize, unreachable: Vec<usize> },

    #[error("invalid problem instance: {0}")]
    InvalidInstance(String),

    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),

    #[error("objective became non-finite at iteration {0}")]
    NonFinite(usize),
}
