//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("{what} must be a probability in [0,1], got {value}")]
    InvalidProbability { what: &'static str, value: f64 },

    #[error("mismatched lengths: {0}")]
    MismatchedLengths(String),

    #[error("worker count must be odd, got {0}")]
    EvenWorkerCount(u64),

    #[error("hypothesis requires pc <= 1/2, got {0}")]
    CheatProbTooLarge(f64),

    #[error("degenerate denominator: {0}")]
    DegenerateDenominator(String),

    #[error("scenario constraints violated: {0}")]
    Validation(String),

    #[error("mechanism infeasible: {0}")]
    Infeasible(String),

    #[error("partition too large for enumeration: {0} groups")]
    PartitionTooLarge(usize),

    #[error("equilibrium not guaranteed: {0}")]
    EquilibriumNotGuaranteed(String),

    #[error("config error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
