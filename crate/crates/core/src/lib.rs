//! Fully dynamic transitive closure through lazily maintained polynomials
//! over Boolean matrices.
//!
//! The crate is organised bottom-up:
//!
//! - [`boolmat`]: bit-packed Boolean matrices, static closure routines.
//! - [`poly`]: lazy polynomial structures with witness counting.
//! - [`closure_log`]: closure maintenance through a logarithmic tower of
//!   degree-3 polynomials.
//! - [`closure_divcon`]: closure maintenance through a recursive block
//!   decomposition with two lazily maintained branches.
//! - [`lazy_intmat`]: integer matrices with buffered rank-one updates.
//! - [`dag_counter`]: reachability on DAGs by counting paths modulo a prime.
//! - [`graph`]: a dynamic digraph front end over the closure backends.
//!
//! Matrix-level APIs use 0-based indices; the graph front end uses 1-based
//! vertex identifiers.

pub mod boolmat;
pub mod closure_divcon;
pub mod closure_log;
pub mod dag_counter;
pub mod error;
pub mod graph;
pub mod lazy_intmat;
pub mod poly;

pub use boolmat::{closure_munro, closure_munro_h, closure_oracle, BoolMatrix};
pub use closure_divcon::DivConClosure;
pub use closure_log::LogClosure;
pub use dag_counter::DagCounter;
pub use error::{Error, Result};
pub use graph::{Backend, DynGraph, GraphOptions};
pub use lazy_intmat::LazyIntMatrix;
pub use poly::{PolyDeg2, PolyK, PolyShadow, Var};
