use thiserror::Error;

/// Errors raised by the circle, norm and subspace machinery.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An index or window falls outside what a grid or window can represent.
    #[error("range error: {0}")]
    Range(String),
    /// An argument violates a mathematical precondition.
    #[error("domain error: {0}")]
    Domain(String),
    /// Wandering-subspace extraction expected a one-dimensional space.
    #[error("wandering subspace has dimension {dim}, expected 1")]
    WanderingDimension { dim: usize },
    /// Malformed literal or descriptor.
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn range<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Range(msg.into()))
}

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
