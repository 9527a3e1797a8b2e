use alloc::string::String;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square: row {row} has {len} entries, expected {expected}")]
    NonSquare { row: usize, len: usize, expected: usize },

    #[error("alphabet size {0} is too small (need at least 2)")]
    AlphabetTooSmall(usize),

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("row {row} sums to {sum}, expected {expected}")]
    RowSumViolation { row: usize, sum: f64, expected: f64 },

    #[error("transition entry ({row}, {col}) = {value} is not strictly positive")]
    NonPositiveEntry { row: usize, col: usize, value: f64 },

    #[error("noise entry ({row}, {col}) = {value} has the wrong sign")]
    SignViolation { row: usize, col: usize, value: f64 },

    #[error("transition is {transition}x{transition} but noise is {noise}x{noise}")]
    DimensionMismatch { transition: usize, noise: usize },

    #[error("epsilon {epsilon} outside admissible range [0, {max}]")]
    EpsilonOutOfRange { epsilon: f64, max: f64 },

    #[error("jet orders differ: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },

    #[error("multivariate jet configurations differ")]
    ConfigMismatch,

    #[error("logarithm of a jet with constant term {0}")]
    NonPositiveConstantTerm(f64),

    #[error("degree {degree} exceeds cap {cap}")]
    DegreeExceedsCap { degree: usize, cap: usize },

    #[error("{count} variables exceeds cap {cap}")]
    TooManyVariables { count: usize, cap: usize },

    #[error("monomial product table would need {pairs} entries (limit {limit})")]
    BasisTooLarge { pairs: usize, limit: usize },

    #[error("multivariate jet has per-variable caps and cannot be specialized")]
    PartialBasis,

    #[error(
        "enumerating {alphabet}^{length} sequences exceeds budget {budget} \
         (needs N = {length})"
    )]
    BudgetExceeded { alphabet: usize, length: usize, budget: u64 },

    #[error("noise profile has {found} sites, expected {expected}")]
    ProfileLengthMismatch { expected: usize, found: usize },

    #[error("symbol {symbol} outside alphabet of size {alphabet}")]
    SymbolOutOfRange { symbol: usize, alphabet: usize },

    #[error("sequence probability {0:e} underflowed; model state is corrupt")]
    UnreachableSequence(f64),

    #[error("coefficient {k} failed to settle: residual {residual:e} > tolerance {tolerance:e}")]
    SettlingViolation { k: usize, residual: f64, tolerance: f64 },

    #[error("hypothesis not met: {0}")]
    HypothesisNotMet(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("stationary distribution is degenerate")]
    SingularSystem,
}

pub type Result<T> = core::result::Result<T, Error>;
