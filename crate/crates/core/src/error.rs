use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("operands use different cloda ({left} vs {right})")]
    ClodumMismatch { left: String, right: String },
    #[error("value {value} is outside the carrier of {clodum}")]
    OutOfCarrier { value: String, clodum: String },
    #[error("{operation} is not supported over {clodum}")]
    Unsupported {
        operation: &'static str,
        clodum: String,
    },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
}

pub type Result<T> = std::result::Result<T, Error>;
