use thiserror::Error;

/// Failures raised by the simulator.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An input violated a precondition (bad grid, mismatched dimensions, unknown label).
    #[error("domain error: {0}")]
    Domain(String),
    /// A computation produced a value outside its valid range (non-PSD matrix, NaN).
    #[error("numerical error: {0}")]
    Numerical(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn numerical(msg: impl Into<String>) -> Self {
        Error::Numerical(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
