use thiserror::Error;

/// Errors raised by the chance-constrained knapsack toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("invalid weight model: {0}")]
    InvalidModel(String),

    #[error("solution has {found} bits but the instance has {expected} items")]
    LengthMismatch { expected: usize, found: usize },

    #[error("inadmissible method: {0}")]
    InadmissibleMethod(String),

    #[error("Chernoff requires nonzero interval width")]
    ZeroIntervalWidth,

    #[error("crossover undefined: Chernoff factor is numerically 1 (eps={eps}, E={expected})")]
    DegenerateCrossover { eps: f64, expected: f64 },

    #[error("capacity {capacity} with {items} items exceeds the dynamic programming budget of {limit} cells")]
    DpBudget { capacity: u64, items: usize, limit: u64 },

    #[error("exhaustive enumeration supports at most {limit} items, got {n}")]
    TooManyItems { n: usize, limit: usize },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("invalid statistics input: {0}")]
    Stats(String),

    #[error("io error on {path}: {message}")]
    Io { path: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }

    pub(crate) fn io(path: &std::path::Path, err: std::io::Error) -> Self {
        Error::Io {
            path: path.display().to_string(),
            message: err.to_string(),
        }
    }
}
