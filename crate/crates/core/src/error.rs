use thiserror::Error;

/// Errors raised by the simulator.
#[derive(Debug, Error)]
pub enum Error {
    /// An input violated a mathematical precondition (non-positive distance,
    /// dimension mismatch, non-PSD matrix, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// A parameter set or experiment configuration is inconsistent.
    #[error("configuration error: {0}")]
    Config(String),

    /// The exhaustive search would exceed its evaluation budget.
    #[error("search budget exceeded: {levels}^{elements} candidates > {budget}")]
    Budget {
        levels: usize,
        elements: usize,
        budget: u64,
    },

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    /// True for errors caused by bad user input rather than a failed run.
    pub fn is_config(&self) -> bool {
        matches!(self, Error::Config(_) | Error::Json(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
