//! Workload generation, trace replay, oracle cross-checking, auditing and
//! benchmarking for the `dyntc` dynamic transitive closure library.
//!
//! - [`trace`]: the line-oriented trace format.
//! - [`gen`]: seeded workload generators.
//! - [`replay`]: trace execution with per-operation measurements and
//!   optional oracle comparison.
//! - [`bench`]: sweeps over vertex counts with log-log trend estimates.
//! - [`audit`]: inline invariant audits and randomized self-checks.

pub mod audit;
pub mod bench;
pub mod error;
pub mod gen;
pub mod replay;
pub mod trace;

pub use error::{HarnessError, Mismatch, Result};
pub use gen::{generate, Profile};
pub use replay::{replay, BenchRecord, ReplayConfig, ReplaySummary};
pub use trace::{Edge, OpKind, Trace, TraceOp};
