use thiserror::Error;

/// Errors produced by the simulation core.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid momentum grid: half-width {0} is below the minimum of 2")]
    InvalidGrid(usize),
    #[error("momentum grid too small: edge leakage {leakage:.3e} exceeds {limit:.3e}{context}")]
    GridTooSmall {
        leakage: f64,
        limit: f64,
        context: String,
    },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("event probability {0} exceeds 1; outside the validity of the per-pulse model")]
    ModelValidity(f64),
    #[error("rate fit error: {0}")]
    Fit(String),
    #[error("ensemble statistics mismatch: {0}")]
    Mismatch(String),
    #[error("trajectory {index} failed: {source}")]
    Trajectory {
        index: usize,
        #[source]
        source: Box<Error>,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

/// Configuration loading and validation errors, kept separate from runtime
/// errors so the CLI can map them to a distinct exit code.
#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config file: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed config: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("config value out of range: \"{key}\" {message}")]
    Range { key: &'static str, message: String },
}

impl ConfigError {
    pub fn range(key: &'static str, message: impl Into<String>) -> Self {
        ConfigError::Range {
            key,
            message: message.into(),
        }
    }
}
