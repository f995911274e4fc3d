use thiserror::Error;

/// Errors raised while building or analysing walks.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("partition enumeration would produce {count} partitions, above the cap of {cap}")]
    CapExceeded { count: u128, cap: u128 },

    #[error("arc ({0},{1}) is not in the arc space")]
    UnknownArc(usize, usize),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("coin at vertex {vertex} is not unitary (residual {residual:e})")]
    NonUnitaryCoin { vertex: usize, residual: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("transition matrix row {vertex} sums to {sum}")]
    RowSum { vertex: usize, sum: f64 },

    #[error("reduced determinant pole at edge {{{0},{1}}}: |1 - t^2 e^(2ikL)| = {2:e}")]
    PoleProximity(usize, usize, f64),

    #[error("k = {k} is not a root: indicator {indicator:e} above {threshold:e}")]
    NotARoot { k: f64, indicator: f64, threshold: f64 },

    #[error("spectra have different sizes ({0} vs {1})")]
    SizeMismatch(usize, usize),

    #[error("eigensolver failed: {0}")]
    Eigensolver(String),

    #[error("config field `{field}`: {message}")]
    Config { field: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
