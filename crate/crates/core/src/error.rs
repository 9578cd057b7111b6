use thiserror::Error;

/// Errors raised when inputs fall outside the domain of an operation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter {name}={value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("malformed functional spec {0:?}: {1}")]
    FunctionalSpec(String, String),

    #[error("malformed sequence spec {0:?}: {1}")]
    SequenceSpec(String, String),

    #[error("entry {index} is {value}, outside [0, 1]")]
    EntryOutOfRange { index: usize, value: f64 },

    #[error("entries sum to {0}, expected 1")]
    NotNormalized(f64),

    #[error("empty input")]
    Empty,

    #[error("totals differ: {0} vs {1}")]
    TotalMismatch(f64, f64),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is not square: {0}x{1}")]
    NotSquare(usize, usize),

    #[error("not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),

    #[error("trace is {0}, expected 1")]
    InvalidTrace(f64),

    #[error("not positive semidefinite (min eigenvalue {0:e})")]
    NotPositive(f64),

    #[error("not an isometry (max deviation of V^dag V from identity {0:e})")]
    NotIsometry(f64),

    #[error("not unitary (max deviation of U^dag U from identity {0:e})")]
    NotUnitary(f64),

    #[error("basis is not orthonormal (max deviation {0:e})")]
    NotOrthonormal(f64),

    #[error("not bistochastic: {0}")]
    NotBistochastic(String),

    #[error("ensemble size {m} is below the rank {rank}")]
    EnsembleTooSmall { m: usize, rank: usize },

    #[error("invalid convex model: {0}")]
    InvalidModel(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
