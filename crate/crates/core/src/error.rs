use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A documented precondition of the operation does not hold.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// Input lies outside the mathematical domain of a formula.
    #[error("outside domain: {0}")]
    Domain(String),

    #[error("eigenvalue iteration did not converge within {sweeps} sweeps")]
    NumericalFailure { sweeps: usize },

    #[error("refusing to sample {requested} points (limit {limit})")]
    MemoryGuard { requested: u64, limit: u64 },
}

pub type Result<T> = std::result::Result<T, Error>;
