use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Input outside the model domain or a malformed configuration.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The opinion integrator refused a step whose change exceeded the guard.
    #[error("integration step rejected at t = {t} s: |dO| = {delta} exceeds {limit}")]
    StepRejected { t: f64, delta: f64, limit: f64 },

    #[error("cannot read {path}: {source}")]
    ReadInput {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed config: {0}")]
    Config(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    /// Validation failures map to exit status 2, everything else to 1.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::InvalidInput(_) | Error::ReadInput { .. } | Error::Config(_)
        )
    }
}
