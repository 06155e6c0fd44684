use thiserror::Error;

use crate::capacity::Subset;

/// Errors raised by every layer of the toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("realization mismatch: cannot combine exact and float values")]
    RealizationMismatch,

    #[error("value {0} lies outside [0, 1]")]
    OutOfRange(String),

    #[error("cannot parse {input:?} as a value: {reason}")]
    Parse { input: String, reason: String },

    #[error("{0} cannot be evaluated in exact realization")]
    UnsupportedRealization(String),

    #[error("grid step {0} must satisfy 0 < step <= 1/2")]
    InvalidGridStep(String),

    #[error("invalid space: {0}")]
    InvalidSpace(String),

    #[error("invalid capacity: {0}")]
    Capacity(#[from] CapacityViolation),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("unknown operator {0:?}")]
    UnknownOperator(String),

    #[error("unknown law {0:?}")]
    UnknownLaw(String),

    #[error("schema error at {path}: {message}")]
    Schema { path: String, message: String },

    #[error("invalid search spec: {0}")]
    InvalidSearch(String),
}

impl Error {
    pub(crate) fn schema(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Schema {
            path: path.into(),
            message: message.into(),
        }
    }
}

/// The constraint a raw subset table breaks.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum CapacityViolation {
    #[error("mu(empty set) must be 0, got {value}")]
    EmptySetNotZero { value: String },

    #[error("mu(X) must be 1, got {value}")]
    WholeSpaceNotOne { value: String },

    #[error("monotonicity: mu({smaller_label}) = {smaller_value} exceeds mu({larger_label}) = {larger_value}")]
    NotMonotone {
        smaller: Subset,
        larger: Subset,
        smaller_label: String,
        larger_label: String,
        smaller_value: String,
        larger_value: String,
    },

    #[error("subset {label} has no value and no completion mode was requested")]
    MissingSubset { subset: Subset, label: String },

    #[error("table mixes exact and float values")]
    MixedRealization,

    #[error("table has {found} entries, expected {expected}")]
    WrongSize { expected: usize, found: usize },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
