use thiserror::Error;

/// Errors raised by estimation, resampling and interval construction.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("non-finite value at row {row}, column {column}")]
    NonFinite { row: usize, column: usize },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("moment matrix {0} is singular; try a lower lag order or more observations")]
    Singular(&'static str),

    #[error("squared canonical correlation {0} lies outside [0, 1)")]
    EigenvalueRange(f64),

    #[error("matrix is not positive definite (pivot {pivot:e} at index {index})")]
    NotPositiveDefinite { index: usize, pivot: f64 },

    #[error("bootstrap recursion diverged at row {row}")]
    Explosive { row: usize },

    #[error("trace statistics must be non-increasing in the rank (J[{rank}] < J[{next}])", next = .rank + 1)]
    IncreasingTrace { rank: usize },

    #[error("no trace critical values for dimension {0} (table covers 1..=12); use an information criterion")]
    CriticalValueRange(usize),

    #[error("{failed} of {total} bootstrap replications failed (limit is 5%); first failure: {first}")]
    TooManyFailures { failed: usize, total: usize, first: String },
}

pub type Result<T> = std::result::Result<T, Error>;
