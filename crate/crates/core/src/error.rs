use thiserror::Error;

/// Errors raised across the simulator and bound engine.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid Pauli label: unexpected {found:?} at position {position}")]
    Parse { position: usize, found: char },

    #[error("empty Pauli label")]
    EmptyLabel,

    #[error("dimension mismatch: expected {expected}, got {found}")]
    Dimension { expected: usize, found: usize },

    #[error("{what} exceeds capacity: {size} > {limit}")]
    Capacity {
        what: &'static str,
        size: usize,
        limit: usize,
    },

    #[error("generators {first} and {second} do not commute")]
    NonCommuting { first: String, second: String },

    #[error("generator {index} ({label}) is dependent on the preceding generators")]
    DependentGenerator { index: usize, label: String },

    #[error("generator set produces -I (element {label})")]
    MinusIdentity { label: String },

    #[error("invalid stabilizer generator {label}: {reason}")]
    InvalidGenerator { label: String, reason: &'static str },

    #[error("{label} is not an element of the stabilizer group")]
    NotInGroup { label: String },

    #[error("assumption violated: {0}")]
    Assumption(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("model error: {0}")]
    Model(String),

    #[error("precondition failed: {what} (residual {residual:e})")]
    Precondition { what: String, residual: f64 },

    #[error("degenerate measurement: {0}")]
    DegenerateMeasurement(String),

    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;
