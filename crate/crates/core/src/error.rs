use thiserror::Error;

/// Errors produced while building or evaluating a channel model.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid taps in {field}: {reason}")]
    InvalidTaps { field: &'static str, reason: String },

    #[error("invalid noise model {field}: {reason}")]
    InvalidNoise { field: &'static str, reason: String },

    #[error("invalid power budget {field}: {value}")]
    InvalidPower { field: &'static str, value: f64 },

    #[error("block length {n} must exceed channel memory {memory}")]
    BlockTooShort { n: usize, memory: usize },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("dimension mismatch: {what} has length {found}, expected {expected}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("periodized noise {field} has negative eigenvalue {value:e} at bin {bin}")]
    IndefinitePeriodization {
        field: &'static str,
        bin: usize,
        value: f64,
    },

    #[error("rate term T{term} is unbounded: zero noise with positive signal at bin {bin}")]
    InfiniteRate { term: usize, bin: usize },

    #[error("power profile {field} integrates to {used}, above budget {budget}")]
    BudgetViolated {
        field: &'static str,
        used: f64,
        budget: f64,
    },

    #[error("noise covariance {field} is singular (min eigenvalue {min_eigenvalue:e})")]
    SingularNoise {
        field: &'static str,
        min_eigenvalue: f64,
    },

    #[error("strong interference condition not verified for these bounds")]
    ConditionNotVerified,

    #[error("all sub-channel gains are zero but the budget is positive")]
    ZeroChannel,

    #[error("invalid allocation: {0}")]
    InvalidAllocation(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
