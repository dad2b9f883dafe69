use thiserror::Error;

/// Errors raised by the numerical and combinatorial engines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum BmvError {
    #[error("dimension must be at least 1")]
    EmptyDimension,

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("invalid rank {rank} for dimension {n}")]
    InvalidRank { rank: usize, n: usize },

    #[error("invalid index: {0}")]
    InvalidIndex(String),

    #[error("matrix is not positive definite (eigenvalue {eigenvalue:e})")]
    NotPositiveDefinite { eigenvalue: f64 },

    #[error("matrix is not positive semidefinite (eigenvalue {eigenvalue:e})")]
    NotPositive { eigenvalue: f64 },

    #[error("matrix function undefined at eigenvalue {eigenvalue:e}")]
    Domain { eigenvalue: f64 },

    #[error("imaginary residue {residue:e} exceeds tolerance {limit:e}")]
    ImaginaryResidue { residue: f64, limit: f64 },

    #[error("word length {p} exceeds the cap {cap}")]
    OverCap { p: usize, cap: usize },

    #[error("exact arithmetic requested but inputs carry no rational entries")]
    NotRational,

    #[error("rationalization needs a {bits}-bit denominator, over the 2^64 budget")]
    PrecisionBudget { bits: u64 },

    #[error("overflow guard: norm bound {bound} exceeds {limit}")]
    Overflow { bound: f64, limit: f64 },

    #[error("singular matrix")]
    Singular,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("malformed matrix document: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, BmvError>;
