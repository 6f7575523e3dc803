//! Error type shared across the crate.

use thiserror::Error;

/// Errors for distribution construction, measure evaluation, and bound
/// evaluation.
#[derive(Debug, Error)]
pub enum Error {
    #[error("negative probability mass at index {index}: {value}")]
    NegativeMass { index: usize, value: f64 },

    #[error("non-finite probability at index {index}: {value}")]
    NonFinite { index: usize, value: f64 },

    #[error("probabilities sum to {sum}, expected 1 within {tol}")]
    SumNotOne { sum: f64, tol: f64 },

    #[error("shape mismatch: expected {expected}, got {got}")]
    ShapeMismatch { expected: String, got: String },

    #[error("index {index} out of range for length {len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("domain error: {what} (got {value})")]
    Domain { what: &'static str, value: f64 },

    #[error("support violation: p({index}) > 0 while q({index}) = 0")]
    SupportViolation { index: usize },

    #[error("alpha {given} is below the required max_y P_X(E_y) = {required}")]
    AlphaTooSmall { given: f64, required: f64 },

    #[error("instance has no event mask")]
    MissingEvent,

    #[error("degenerate instance: event mask empty or full after {retries} retries")]
    DegenerateInstance { retries: usize },

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn domain(what: &'static str, value: f64) -> Self {
        Error::Domain { what, value }
    }

    pub(crate) fn shape(expected: impl Into<String>, got: impl Into<String>) -> Self {
        Error::ShapeMismatch {
            expected: expected.into(),
            got: got.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
