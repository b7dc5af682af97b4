//! Crate-wide error type.
//!
//! `Degenerate` is a *resample signal*: the sampled configuration hit a
//! measure-zero set (corner exclusion, strand collision, puncture
//! incidence) and the caller should draw a fresh sample. Everything else is
//! a hard input/validation error.

use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("generator index {idx} out of range for rank {rank}")]
    GeneratorOutOfRange { idx: u16, rank: u16 },

    #[error("empty pattern")]
    EmptyPattern,

    #[error("presentation mismatch: {0}")]
    PresentationMismatch(String),

    #[error("word parse error: {0}")]
    Parse(String),

    #[error("point lies on the polygon boundary")]
    BoundaryPoint,

    #[error("degenerate sample: {0}")]
    Degenerate(String),

    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    /// True when the condition is a resample signal rather than a hard error.
    pub fn is_resample(&self) -> bool {
        matches!(self, Error::Degenerate(_) | Error::BoundaryPoint)
    }

    pub(crate) fn degenerate(msg: impl Into<String>) -> Self {
        Error::Degenerate(msg.into())
    }

    pub(crate) fn geometry(msg: impl Into<String>) -> Self {
        Error::InvalidGeometry(msg.into())
    }

    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
