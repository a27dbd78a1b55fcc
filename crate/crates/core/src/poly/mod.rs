//! Lazy maintenance of polynomials over Boolean matrices.
//!
//! [`PolyDeg2`] maintains sums of products of two variables with witness
//! counters and timestamps. [`PolyK`] maintains sums of longer products by
//! composing degree-2 structures along prefix and suffix chains. Both support
//! `init`, `set_row`, `set_col`, `lazy_set`, `reset` and `lookup`; the looked-up
//! matrix never contains a 1 absent from the true polynomial value, and it
//! contains every 1 introduced by a non-lazy operation.

mod deg2;
mod polyk;
mod shadow;

pub use deg2::PolyDeg2;
pub use polyk::PolyK;
pub use shadow::PolyShadow;

/// Identifies a variable: position `pos` (0-based) inside term `term`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var {
    /// Term index.
    pub term: usize,
    /// Position of the factor inside the term's product.
    pub pos: usize,
}

impl Var {
    /// Shorthand constructor.
    pub const fn new(term: usize, pos: usize) -> Self {
        Self { term, pos }
    }
}
