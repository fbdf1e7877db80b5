use thiserror::Error;

/// Errors surfaced by the exact engines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KgError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("unsupported scale in exact mode: {0}")]
    UnsupportedScale(String),
    #[error("undefined ratio: measure sum is zero")]
    UndefinedRatio,
}

pub type Result<T> = std::result::Result<T, KgError>;

pub(crate) fn domain(msg: impl Into<String>) -> KgError {
    KgError::Domain(msg.into())
}
