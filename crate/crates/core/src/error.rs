use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("term of total degree {found} in a polynomial of degree {expected}")]
    NotHomogeneous { expected: u32, found: u32 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("convergence failure: {0}")]
    ConvergenceFailure(String),

    #[error("invariant violated: {0}")]
    InvariantViolated(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: msg.into(),
        }
    }

    /// Stable variant name, printed by the CLI and exposed over the C ABI.
    pub fn name(&self) -> &'static str {
        match self {
            Error::NotHomogeneous { .. } => "NotHomogeneous",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::InvalidParameter(_) => "InvalidParameter",
            Error::Parse { .. } => "ParseError",
            Error::ConvergenceFailure(_) => "ConvergenceFailure",
            Error::InvariantViolated(_) => "InvariantViolated",
            Error::Io(_) => "IoError",
            Error::Csv(_) => "CsvError",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
