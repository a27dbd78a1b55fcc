//! Harness error type.

use std::fmt;

use thiserror::Error;

/// First disagreement between a backend and the oracle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    /// Backend under test.
    pub backend: String,
    /// Index of the operation after which the disagreement was observed.
    pub op_index: usize,
    /// Source vertex (1-based).
    pub u: usize,
    /// Target vertex (1-based).
    pub v: usize,
    /// Oracle answer.
    pub expected: bool,
    /// Backend answer.
    pub got: bool,
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "MISMATCH backend={} op={} pair={},{} expected={} got={}",
            self.backend,
            self.op_index,
            self.u,
            self.v,
            u8::from(self.expected),
            u8::from(self.got)
        )
    }
}

/// Errors raised by trace handling, replay and auditing.
#[derive(Debug, Error)]
pub enum HarnessError {
    /// Malformed trace text.
    #[error("trace line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// Unknown workload profile name.
    #[error("unknown profile '{0}' (expected mixed, incremental, decremental or dag-mixed)")]
    InvalidProfile(String),

    /// A backend disagreed with the oracle.
    #[error("{0}")]
    Mismatch(Mismatch),

    /// A backend failed its internal consistency audit.
    #[error("AUDIT backend={backend} op={op_index} {msg}")]
    Audit {
        backend: String,
        op_index: usize,
        msg: String,
    },

    /// An operation was rejected by the library.
    #[error("operation {op_index}: {source}")]
    Op {
        op_index: usize,
        #[source]
        source: dyntc::Error,
    },

    /// Library error outside of an operation.
    #[error(transparent)]
    Core(#[from] dyntc::Error),

    /// I/O failure.
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Result alias of the harness.
pub type Result<T> = std::result::Result<T, HarnessError>;
