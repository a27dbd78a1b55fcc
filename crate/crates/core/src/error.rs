//! Error type shared by every module of the crate.

use thiserror::Error;

/// Errors reported by matrix, polynomial, closure and graph operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Two operands (or an operand and a structure) have different dimensions.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// A row, column or vertex index lies outside the valid range.
    #[error("index {index} out of range for dimension {n}")]
    IndexOutOfRange { index: usize, n: usize },

    /// A subtraction or reset named an entry that is not currently set.
    #[error("entry ({row}, {col}) is not set, so it cannot be removed")]
    NotSubset { row: usize, col: usize },

    /// A polynomial variable identifier does not exist.
    #[error("unknown variable (term {term}, position {pos})")]
    UnknownVariable { term: usize, pos: usize },

    /// The number of initial values passed to `init` is wrong.
    #[error("expected {expected} variable values, got {got}")]
    WrongArity { expected: usize, got: usize },

    /// Inserting the edge would close a directed cycle; `path` is the
    /// existing path from the edge head back to its tail.
    #[error("edge ({from}, {to}) would close the cycle {path:?}")]
    Cycle {
        from: usize,
        to: usize,
        path: Vec<usize>,
    },

    /// The edge is already present.
    #[error("edge ({from}, {to}) already present")]
    DuplicateEdge { from: usize, to: usize },

    /// The edge is not present.
    #[error("edge ({from}, {to}) not present")]
    MissingEdge { from: usize, to: usize },

    /// An edge of a centered insertion does not touch the center vertex.
    #[error("edge ({from}, {to}) is not incident to vertex {center}")]
    NotIncident {
        center: usize,
        from: usize,
        to: usize,
    },

    /// A delta passed to a centered update is not confined to one row and column.
    #[error("update is not centered on any single index")]
    NotCentered,

    /// A modulus that is not prime was supplied.
    #[error("{0} is not a prime")]
    NotPrime(u64),

    /// A configuration value is outside its admissible range.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Text input could not be parsed.
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
