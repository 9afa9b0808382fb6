use alloc::string::String;

use crate::subset::Subset;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("point {point} appears more than once")]
    RepeatedPoint { point: usize },
    #[error("point {point} is outside the ground set of size {v}")]
    PointOutOfRange { point: usize, v: usize },
    #[error("malformed cycle notation at byte {position}: {reason}")]
    MalformedCycles { position: usize, reason: &'static str },
    #[error("ground sets are limited to 64 points, got {v}")]
    GroundSetTooLarge { v: usize },
    #[error("permutation acts on {found} points, expected {expected}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("images do not form a bijection")]
    NotABijection,
    #[error("group has more than {cap} elements")]
    GroupTooLarge { cap: usize },
    #[error("level {level} is not available (sequence has levels 0..={max})")]
    LevelOutOfRange { level: usize, max: usize },
    #[error("levels must satisfy {0}")]
    LevelOrder(&'static str),
    #[error("level {level} is not a partition: {reason}")]
    NotAPartition { level: usize, reason: String },
    #[error("dimension mismatch in {0}")]
    DimensionMismatch(&'static str),
    #[error("{context}: entry ({row}, {col}) is not divisible exactly")]
    InexactDivision { context: &'static str, row: usize, col: usize },
    #[error("invalid design parameters t={t}, v={v}, k={k}, lambda={lambda}: {reason}")]
    InvalidParams { t: u64, v: u64, k: u64, lambda: u64, reason: &'static str },
    #[error("lambda_({i},{j}) requested but i + j exceeds t = {t}")]
    LambdaIndex { i: usize, j: usize, t: usize },
    #[error("lambda_({i},{j}) is not an integer")]
    NonIntegralLambda { i: usize, j: usize },
    #[error("invalid block selection: {0}")]
    InvalidSelection(String),
    #[error("block {index} ({block:?}) has size {found}, expected {expected}")]
    UnequalBlockSizes { index: usize, block: Subset, expected: usize, found: usize },
    #[error("matrix is {rows}x{cols}, expected a square matrix")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("entry does not fit the solver's machine integers: {0}")]
    Overflow(&'static str),
    #[error("inconsistent constraint system: {0}")]
    Inconsistent(String),
    #[error("brute-force cap exceeded: {q}^{v} vectors exceeds {cap}")]
    SubspaceCapExceeded { q: u64, v: usize, cap: u64 },
    #[error("field size {q} is not supported")]
    UnsupportedField { q: u64 },
    #[error("{0}")]
    Invalid(String),
}
