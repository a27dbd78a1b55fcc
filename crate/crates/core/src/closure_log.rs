//! Closure maintenance through a tower of degree-3 polynomials.
//!
//! Level `k` maintains `P_k = P_{k-1} + P_{k-1}^2 + P_{k-1}^3` with `P_0 = X`.
//! Level `k` reports every pair joined by a path of length at most `2^k` and
//! only pairs joined by paths of length at most `3^k`, so after `log2 n`
//! levels `I + P_top` is the reflexive-transitive closure of `X`.
//!
//! Each level is a [`PolyK`] with terms of degree 1, 2 and 3 whose six
//! variables all hold the looked-up value of the level below.

use crate::boolmat::{closure_oracle, BoolMatrix};
use crate::error::{Error, Result};
use crate::poly::{PolyK, Var};

/// Term degrees of every level polynomial.
const LEVEL_DEGREES: [usize; 3] = [1, 2, 3];

/// Fully dynamic closure of an `n x n` Boolean matrix by logarithmic decomposition.
#[derive(Clone, Debug)]
pub struct LogClosure {
    n: usize,
    size: usize,
    x: BoolMatrix,
    levels: Vec<PolyK>,
    vars: Vec<Var>,
    top: BoolMatrix,
}

impl LogClosure {
    /// Closure structure for `n` vertices, initialised with the empty matrix.
    /// Internally `n` is padded to a power of two with isolated vertices.
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("dimension must be positive".into()));
        }
        let size = n.next_power_of_two();
        let depth = size.trailing_zeros() as usize;
        let levels = (0..depth)
            .map(|_| PolyK::new(size, &LEVEL_DEGREES))
            .collect::<Result<Vec<_>>>()?;
        let vars = PolyK::new(1, &LEVEL_DEGREES)?.vars();
        let mut c = Self {
            n,
            size,
            x: BoolMatrix::new(size),
            levels,
            vars,
            top: BoolMatrix::identity(size),
        };
        c.init_star(&BoolMatrix::new(n))?;
        Ok(c)
    }

    /// Number of vertices.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of polynomial levels (`log2` of the padded size).
    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    /// Current input matrix.
    pub fn matrix(&self) -> BoolMatrix {
        self.x.truncated(self.n)
    }

    fn check_dim(&self, m: &BoolMatrix) -> Result<()> {
        if m.n() == self.n {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.n,
                got: m.n(),
            })
        }
    }

    fn refresh_top(&mut self) {
        self.top = match self.levels.last() {
            Some(level) => level.lookup().clone(),
            None => BoolMatrix::new(self.size),
        };
        for i in 0..self.size {
            self.top.set(i, i);
        }
    }

    /// Initialises the structure with input `y`, building every level from
    /// the looked-up value of the level below.
    pub fn init_star(&mut self, y: &BoolMatrix) -> Result<()> {
        self.check_dim(y)?;
        self.x = y.padded(self.size);
        let mut below = self.x.clone();
        for level in &mut self.levels {
            let values = vec![below.clone(); self.vars.len()];
            level.init(&values)?;
            below = level.lookup().clone();
        }
        self.refresh_top();
        Ok(())
    }

    /// Inserts the entries of row `i` and column `i` of `delta`.
    pub fn set_star(&mut self, i: usize, delta: &BoolMatrix) -> Result<()> {
        self.check_dim(delta)?;
        if i >= self.n {
            return Err(Error::IndexOutOfRange {
                index: i,
                n: self.n,
            });
        }
        let mut change = delta.padded(self.size).cross_slab(i)?.minus(&self.x);
        self.x.or_assign(&change);
        for level in &mut self.levels {
            for &var in &self.vars {
                level.lazy_set(&change, var)?;
            }
            for &var in &self.vars {
                level.set_row(i, &change, var)?;
                level.set_col(i, &change, var)?;
            }
            change = level.lookup().clone();
        }
        self.refresh_top();
        Ok(())
    }

    /// Removes the entries of `delta`, which must all be present.
    pub fn reset_star(&mut self, delta: &BoolMatrix) -> Result<()> {
        self.check_dim(delta)?;
        let mut change = delta.padded(self.size);
        if let Some((row, col)) = change.first_outside(&self.x) {
            return Err(Error::NotSubset { row, col });
        }
        self.x.and_not_assign(&change);
        for level in &mut self.levels {
            if change.is_zero() {
                break;
            }
            let before = level.lookup().clone();
            for &var in &self.vars {
                level.reset(&change, var)?;
            }
            let after = level.lookup();
            assert!(
                after.is_subset_of(&before),
                "a level gained entries during a reset"
            );
            change = before.minus(after);
        }
        self.refresh_top();
        Ok(())
    }

    /// Whether `y` is reachable from `x` (reflexive).
    pub fn lookup_star(&self, x: usize, y: usize) -> Result<bool> {
        for i in [x, y] {
            if i >= self.n {
                return Err(Error::IndexOutOfRange {
                    index: i,
                    n: self.n,
                });
            }
        }
        Ok(self.top.get(x, y))
    }

    /// The maintained closure matrix.
    pub fn closure(&self) -> BoolMatrix {
        self.top.truncated(self.n)
    }

    /// Looked-up value of level `k` (1-based; level 0 is the input).
    pub fn level_lookup(&self, k: usize) -> BoolMatrix {
        if k == 0 {
            self.x.truncated(self.n)
        } else {
            self.levels[k - 1].lookup().truncated(self.n)
        }
    }

    /// Cumulative witness triples visited by all levels.
    pub fn work_units(&self) -> u64 {
        self.levels.iter().map(PolyK::work_units).sum()
    }

    /// Audits every level's counters and slot consistency, and compares the
    /// maintained closure with a recomputation.
    pub fn audit(&self) -> std::result::Result<(), String> {
        for (k, level) in self.levels.iter().enumerate() {
            level.audit().map_err(|e| format!("level {}: {e}", k + 1))?;
        }
        if self.top != closure_oracle(&self.x) {
            return Err("maintained closure differs from recomputation".into());
        }
        Ok(())
    }
}
