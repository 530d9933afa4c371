use thiserror::Error;

/// Errors produced by parsing, mining, scoring and the bootstrap machinery.
#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("row {row}: expected {expected} columns, found {found}")]
    RaggedRow {
        row: usize,
        expected: usize,
        found: usize,
    },

    #[error("row {row}, column {column}: empty value (missing values are not supported)")]
    EmptyValue { row: usize, column: usize },

    #[error("item {item} is outside the alphabet (size {alphabet_size})")]
    ItemOutOfRange { item: u32, alphabet_size: usize },

    #[error("code table is missing singleton entries (first missing item: {item})")]
    MissingSingleton { item: u32 },

    #[error("pattern {pattern} has usage 0; encode with smoothing to score unseen data")]
    ZeroUsage { pattern: String },

    #[error("score distribution is degenerate (stddev = 0 or no samples); no threshold can separate it")]
    DegenerateDistribution,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
