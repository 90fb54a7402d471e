use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("degenerate postselection noise: 1 + kappa[{index}] = {value} is not positive")]
    DegenerateNoise { index: usize, value: f64 },
    #[error("degenerate data: {0}")]
    DegenerateData(String),
    #[error("channel is not trace preserving (completeness deviation {0:e})")]
    Channel(f64),
    #[error("outcome probabilities invalid by {0:e}")]
    PhysicsBug(f64),
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
