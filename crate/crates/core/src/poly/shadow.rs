//! Plain reference model of a lazily maintained polynomial.
//!
//! [`PolyShadow`] mirrors the operations of [`PolyK`](super::PolyK) on plain
//! matrices and derives two bounds for the looked-up value: the exact
//! polynomial `P` over the current variable values, and a lower bound `M`
//! over the *confirmed* entries of every variable. An entry is confirmed when
//! it is written by `init`, or when it lies on the row (column) of a variable
//! touched by `set_row` (`set_col`); a `lazy_set` leaves new entries
//! unconfirmed and `reset` removes entries outright, as if they had never
//! been inserted. A correct implementation satisfies `M ⊆ lookup() ⊆ P`.

use super::Var;
use crate::boolmat::BoolMatrix;
use crate::error::{Error, Result};

/// Reference model of a polynomial `Σ_a X_1^a ⋯ X_{k_a}^a`.
#[derive(Clone, Debug)]
pub struct PolyShadow {
    n: usize,
    degrees: Vec<usize>,
    offsets: Vec<usize>,
    values: Vec<BoolMatrix>,
    confirmed: Vec<BoolMatrix>,
}

impl PolyShadow {
    /// All-zero model with term degrees `degrees`.
    pub fn new(n: usize, degrees: &[usize]) -> Self {
        let mut offsets = Vec::with_capacity(degrees.len());
        let mut total = 0;
        for &k in degrees {
            offsets.push(total);
            total += k;
        }
        Self {
            n,
            degrees: degrees.to_vec(),
            offsets,
            values: vec![BoolMatrix::new(n); total],
            confirmed: vec![BoolMatrix::new(n); total],
        }
    }

    fn flat(&self, var: Var) -> Result<usize> {
        match self.degrees.get(var.term) {
            Some(&k) if var.pos < k => Ok(self.offsets[var.term] + var.pos),
            _ => Err(Error::UnknownVariable {
                term: var.term,
                pos: var.pos,
            }),
        }
    }

    /// Assigns every variable; all entries become confirmed.
    pub fn init(&mut self, values: &[BoolMatrix]) -> Result<()> {
        if values.len() != self.values.len() {
            return Err(Error::WrongArity {
                expected: self.values.len(),
                got: values.len(),
            });
        }
        self.values = values.to_vec();
        self.confirmed = values.to_vec();
        Ok(())
    }

    /// Mirrors a row update: inserts row `i` of `delta` and confirms row `i`.
    pub fn set_row(&mut self, i: usize, delta: &BoolMatrix, var: Var) -> Result<()> {
        let v = self.flat(var)?;
        self.values[v].or_assign(&delta.row_slab(i)?);
        let row = self.values[v].row_slab(i)?;
        self.confirmed[v].or_assign(&row);
        Ok(())
    }

    /// Mirrors a column update: inserts column `i` of `delta` and confirms column `i`.
    pub fn set_col(&mut self, i: usize, delta: &BoolMatrix, var: Var) -> Result<()> {
        let v = self.flat(var)?;
        self.values[v].or_assign(&delta.col_slab(i)?);
        let col = self.values[v].col_slab(i)?;
        self.confirmed[v].or_assign(&col);
        Ok(())
    }

    /// Mirrors a lazy update: inserts `delta` without confirming anything.
    pub fn lazy_set(&mut self, delta: &BoolMatrix, var: Var) -> Result<()> {
        let v = self.flat(var)?;
        self.values[v].or_assign(delta);
        Ok(())
    }

    /// Mirrors a reset; `delta` must be contained in the variable.
    pub fn reset(&mut self, delta: &BoolMatrix, var: Var) -> Result<()> {
        let v = self.flat(var)?;
        if let Some((row, col)) = delta.first_outside(&self.values[v]) {
            return Err(Error::NotSubset { row, col });
        }
        self.values[v].and_not_assign(delta);
        self.confirmed[v].and_not_assign(delta);
        Ok(())
    }

    /// Current value of `var`.
    pub fn value(&self, var: Var) -> Result<&BoolMatrix> {
        Ok(&self.values[self.flat(var)?])
    }

    fn evaluate(&self, vars: &[BoolMatrix]) -> BoolMatrix {
        let mut sum = BoolMatrix::new(self.n);
        for (term, &k) in self.degrees.iter().enumerate() {
            let first = self.offsets[term];
            let mut prod = vars[first].clone();
            for v in &vars[first + 1..first + k] {
                prod = prod.mul(v).expect("variables share one dimension");
            }
            sum.or_assign(&prod);
        }
        sum
    }

    /// Exact value `P` of the polynomial.
    pub fn upper(&self) -> BoolMatrix {
        self.evaluate(&self.values)
    }

    /// Value `M` of the polynomial over confirmed entries only.
    pub fn lower(&self) -> BoolMatrix {
        self.evaluate(&self.confirmed)
    }
}
