use alloc::string::String;

/// Errors produced by the numerical engines.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid hamiltonian: {0}")]
    InvalidSpec(String),
    #[error("matrix is not positive semidefinite: {0}")]
    NotPsd(String),
    #[error("point t = {0} lies outside the interval [a, b)")]
    OutOfDomain(f64),
    #[error("normalization violated: {0}")]
    NotNormalized(String),
    #[error("not in the limit point case: {0}")]
    NotLimitPoint(String),
    #[error("degenerate tail: h1 vanishes on a terminal interval ({0})")]
    DegenerateTail(String),
    #[error("invalid growth function: {0}")]
    InvalidGrowth(String),
    #[error("unsupported order rho_g = {0}: engines require rho_g > 1")]
    UnsupportedOrder(f64),
    #[error("value {0} cannot be bracketed")]
    Range(f64),
    #[error("sequence too short: need at least {need}, got {got}")]
    TooShort { need: usize, got: usize },
    #[error("degenerate grid: {0}")]
    DegenerateGrid(String),
    #[error("partition does not match the grid: {0}")]
    PartitionMismatch(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("scan step underflow: window too large ({0})")]
    WindowTooLarge(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = core::result::Result<T, Error>;
