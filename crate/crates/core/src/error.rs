use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("shape mismatch: expected {expected}, got {got}")]
    ShapeMismatch { expected: String, got: String },

    #[error("graph is disconnected")]
    Disconnected,

    #[error("graph is bipartite")]
    Bipartite,

    #[error("watts-strogatz graph not connected after {0} attempts")]
    RetryBudgetExhausted(usize),

    #[error("graph too large for dense eigen-decomposition: {n} nodes (cap {cap})")]
    TooLarge { n: usize, cap: usize },

    #[error("non-finite input")]
    NonFinite,

    #[error("index {index} out of range for {len} nodes")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("degenerate data: {0}")]
    Degenerate(String),

    #[error("reference solver did not reach tolerance {tolerance:e} within {iterations} iterations (certificate {certificate:e})")]
    NotConverged {
        tolerance: f64,
        iterations: usize,
        certificate: f64,
    },

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid config: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
