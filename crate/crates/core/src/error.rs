//! Error type shared by all modules.

use thiserror::Error;

/// Errors produced by construction, analysis, and simulation routines.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument violates a documented precondition.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    /// A frequency vector fails the requirements of a measure
    /// (nonnegative, sums to one, shift-invariant).
    #[error("invalid measure: {0}")]
    InvalidMeasure(String),
    /// An internal consistency check failed; indicates a bug.
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
