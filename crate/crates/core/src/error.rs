use thiserror::Error;

/// Errors raised by the numerical pipelines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("scan window leaves the spectrum support: scaled point {point} at t = {t}")]
    OutsideSupport { t: f64, point: f64 },

    #[error("Nyström matrix is numerically singular (order {order}, t = {t})")]
    SingularSystem { order: usize, t: f64 },

    #[error("integration diverged at y = {y}: {reason}")]
    IntegrationDivergence { y: f64, reason: String },

    #[error("range mismatch: {0}")]
    RangeMismatch(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
