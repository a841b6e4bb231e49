use alloc::string::String;

/// Errors produced by the numerical kernel and the domain modules.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("subsystem index set must be nonempty")]
    EmptyKeepSet,
    #[error("invalid subsystem index {0}")]
    InvalidSubsystem(usize),
    #[error("matrix is not Hermitian (deviation {deviation:e})")]
    NotHermitian { deviation: f64 },
    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps")]
    NoConvergence { sweeps: usize },
    #[error("operator is not positive semidefinite (eigenvalue {eigenvalue:e})")]
    NotPositive { eigenvalue: f64 },
    #[error("trace is {trace}, expected 1")]
    BadTrace { trace: f64 },
    #[error("vector has zero norm")]
    ZeroVector,
    #[error("vector is not normalized (norm^2 = {norm_sqr})")]
    NotNormalized { norm_sqr: f64 },
    #[error("non-finite entry in input")]
    NonFinite,
    #[error("index {index} out of range (limit {limit})")]
    OutOfRange { index: usize, limit: usize },
    #[error("invalid bipartition: {0}")]
    InvalidCut(String),
    #[error("unknown party `{0}`")]
    UnknownParty(String),
    #[error("matrix is not an isometry (deviation {deviation:e})")]
    NotIsometry { deviation: f64 },
    #[error("measurement is not complete (deviation {deviation:e})")]
    Incomplete { deviation: f64 },
    #[error("POVM element `{label}` has rank > 1 (second eigenvalue {second:e})")]
    NotRankOne { label: String, second: f64 },
    #[error("state is mixed across the cut (purity {purity})")]
    MixedState { purity: f64 },
    #[error("malformed protocol: {0}")]
    MalformedProtocol(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("{0}-copy analysis is not supported (only n = 2)")]
    UnsupportedCopies(usize),
    #[error("unknown root measure `{0}`")]
    UnknownMeasure(String),
}

pub type Result<T> = core::result::Result<T, Error>;
