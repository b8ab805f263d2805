use thiserror::Error;

/// Errors raised by the toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("value {value} outside the domain of {what}: {expected}")]
    Domain {
        what: &'static str,
        value: f64,
        expected: &'static str,
    },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("sample sizes differ: {left} vs {right}")]
    UnequalSizes { left: usize, right: usize },

    #[error("non-finite value at row {row}, column {col}")]
    NonFinite { row: usize, col: usize },

    #[error("column {col} is constant")]
    DegenerateColumn { col: usize },

    #[error("ragged input: row {row} has {got} columns, expected {expected}")]
    Ragged { row: usize, expected: usize, got: usize },

    #[error("training set contains a single class")]
    SingleClass,

    #[error("too few examples: need at least {needed}, got {got}")]
    TooFew { needed: usize, got: usize },

    #[error("{test} requires one-dimensional samples, got dimension {dim}")]
    NotUnivariate { test: &'static str, dim: usize },

    #[error("degenerate statistic: {0}")]
    Degenerate(&'static str),

    #[error("training diverged: non-finite parameter after {step} steps")]
    Diverged { step: usize },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
