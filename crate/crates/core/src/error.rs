use thiserror::Error;

/// Errors raised across the crate. Each variant names the contract that was
/// violated so callers can tell bad input from a failed numerical check.
#[derive(Debug, Error)]
pub enum Error {
    #[error("input shape mismatch: expected {expected}, got {got}")]
    InputShape { expected: usize, got: usize },

    #[error("network structure error: {0}")]
    Structure(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("degenerate chart {chart}: {reason}")]
    DegenerateChart { chart: usize, reason: String },

    #[error("cover verification failed: {0}")]
    Coverage(String),

    #[error("transport resolution too coarse: {0}")]
    Resolution(String),

    #[error("exact solver size cap exceeded: n = {n} > {cap}; use the sliced estimator for large clouds")]
    SizeCap { n: usize, cap: usize },

    #[error("out of scope: {0}")]
    Scope(String),

    #[error("fit error: {0}")]
    Fit(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
