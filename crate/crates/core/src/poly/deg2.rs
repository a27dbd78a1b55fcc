//! Lazily maintained sum of products `P = Σ_a X1^a · X2^a`.
//!
//! For every term `a` and every pair `(x, z)` the structure keeps a counter
//! `Prod_a[x, z]` of the witnesses `y` with `X1^a[x, y] = X2^a[y, z] = 1`
//! that are currently *accounted*. A witness is accounted when both of its
//! entries were last switched on no later than the most recent row or column
//! operation touching the triple, which is the timestamp predicate
//! implemented by [`PolyDeg2::predicate`]. `S[x, z]` counts the terms with a
//! positive counter and the looked-up matrix is `S > 0`.
//!
//! Lazy insertions only record the new 1's and their flip time; they become
//! accounted when a later row or column operation touches them. Resets
//! remove exactly the accounted witnesses that contain a removed entry, which
//! leaves the counters as if the entry had never been set.

use crate::boolmat::BoolMatrix;
use crate::error::{Error, Result};
use crate::poly::Var;

const NIL: u32 = u32::MAX;

/// Doubly linked list of indices ordered by most recent touch.
#[derive(Clone, Debug)]
pub(crate) struct Recency {
    next: Vec<u32>,
    prev: Vec<u32>,
    head: u32,
}

impl Recency {
    fn new(n: usize) -> Self {
        let mut r = Self {
            next: vec![NIL; n],
            prev: vec![NIL; n],
            head: NIL,
        };
        r.reset();
        r
    }

    fn reset(&mut self) {
        let n = self.next.len();
        for i in 0..n {
            self.next[i] = if i + 1 < n { (i + 1) as u32 } else { NIL };
            self.prev[i] = if i > 0 { (i - 1) as u32 } else { NIL };
        }
        self.head = if n > 0 { 0 } else { NIL };
    }

    fn move_to_front(&mut self, i: usize) {
        let i32_ = i as u32;
        if self.head == i32_ {
            return;
        }
        let (p, nx) = (self.prev[i], self.next[i]);
        if p != NIL {
            self.next[p as usize] = nx;
        }
        if nx != NIL {
            self.prev[nx as usize] = p;
        }
        self.prev[i] = NIL;
        self.next[i] = self.head;
        if self.head != NIL {
            self.prev[self.head as usize] = i32_;
        }
        self.head = i32_;
    }

    fn iter(&self) -> RecencyIter<'_> {
        RecencyIter {
            list: self,
            cur: self.head,
        }
    }
}

struct RecencyIter<'a> {
    list: &'a Recency,
    cur: u32,
}

impl Iterator for RecencyIter<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.cur == NIL {
            return None;
        }
        let i = self.cur as usize;
        self.cur = self.list.next[i];
        Some(i)
    }
}

/// One variable of the polynomial together with its timestamp ledgers.
#[derive(Clone, Debug)]
struct Slot {
    rows: BoolMatrix,
    cols: BoolMatrix,
    last_flip: Vec<u64>,
    last_row: Vec<u64>,
    last_col: Vec<u64>,
    row_recency: Recency,
    col_recency: Recency,
}

impl Slot {
    fn new(n: usize) -> Self {
        Self {
            rows: BoolMatrix::new(n),
            cols: BoolMatrix::new(n),
            last_flip: vec![0; n * n],
            last_row: vec![0; n],
            last_col: vec![0; n],
            row_recency: Recency::new(n),
            col_recency: Recency::new(n),
        }
    }

    fn assign(&mut self, value: &BoolMatrix, time: u64) {
        self.rows = value.clone();
        self.cols = value.transpose();
        self.last_flip.iter_mut().for_each(|t| *t = time);
        self.last_row.iter_mut().for_each(|t| *t = time);
        self.last_col.iter_mut().for_each(|t| *t = time);
        self.row_recency.reset();
        self.col_recency.reset();
    }

    /// Switches on the entries of `delta` restricted to row `i` (or to every
    /// row when `i` is `None`) that are currently 0. Returns how many flipped.
    fn absorb_rows(&mut self, delta: &BoolMatrix, rows: Option<usize>, time: u64) -> usize {
        let n = self.rows.n();
        let range = match rows {
            Some(i) => i..i + 1,
            None => 0..n,
        };
        let mut flipped = 0;
        for x in range {
            let words = self.rows.words_per_row();
            for w in 0..words {
                let fresh = delta.row(x)[w] & !self.rows.row(x)[w];
                if fresh == 0 {
                    continue;
                }
                self.rows.row_mut(x)[w] |= fresh;
                let mut bits = fresh;
                while bits != 0 {
                    let y = w * 64 + bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    self.cols.set(y, x);
                    self.last_flip[x * n + y] = time;
                    flipped += 1;
                }
            }
        }
        flipped
    }

    /// Switches on the entries of column `i` of `delta` that are currently 0.
    fn absorb_col(&mut self, delta: &BoolMatrix, i: usize, time: u64) {
        let n = self.rows.n();
        for x in 0..n {
            if delta.get(x, i) && !self.rows.get(x, i) {
                self.rows.set(x, i);
                self.cols.set(i, x);
                self.last_flip[x * n + i] = time;
            }
        }
    }

    fn remove(&mut self, delta: &BoolMatrix) {
        for (x, y) in delta.ones_iter() {
            self.rows.unset(x, y);
            self.cols.unset(y, x);
        }
    }
}

/// Counter bookkeeping shared by the increment and decrement paths.
struct Counters<'a> {
    n: usize,
    prod: &'a mut [u32],
    s: &'a mut [u32],
    out: &'a mut BoolMatrix,
    delta: &'a mut BoolMatrix,
    phi_inc: &'a mut u64,
    phi_dec: &'a mut u64,
}

impl Counters<'_> {
    #[inline]
    fn inc(&mut self, x: usize, z: usize) {
        let idx = x * self.n + z;
        self.prod[idx] += 1;
        *self.phi_inc += 1;
        if self.prod[idx] == 1 {
            self.s[idx] += 1;
            if self.s[idx] == 1 {
                self.out.set(x, z);
                self.delta.set(x, z);
            }
        }
    }

    #[inline]
    fn dec(&mut self, x: usize, z: usize) {
        let idx = x * self.n + z;
        debug_assert!(self.prod[idx] > 0, "witness counter underflow");
        self.prod[idx] -= 1;
        *self.phi_dec += 1;
        if self.prod[idx] == 0 {
            self.s[idx] -= 1;
            if self.s[idx] == 0 {
                self.out.unset(x, z);
                self.delta.set(x, z);
            }
        }
    }
}

/// Lazy degree-2 polynomial `Σ_{a < h} X1^a · X2^a` over `n x n` matrices.
///
/// Variables are addressed by [`Var`] with `term = a` and `pos ∈ {0, 1}`.
/// Every mutating operation returns the change it caused in the looked-up
/// matrix: new 1's for `init`-free set operations and removed 1's for resets.
#[derive(Clone, Debug)]
pub struct PolyDeg2 {
    n: usize,
    h: usize,
    time: u64,
    slots: Vec<Slot>,
    prod: Vec<Vec<u32>>,
    s: Vec<u32>,
    out: BoolMatrix,
    work: u64,
    phi_inc: Vec<u64>,
    phi_dec: Vec<u64>,
}

impl PolyDeg2 {
    /// Polynomial with `h` terms over `n x n` matrices, every variable zero.
    pub fn new(n: usize, h: usize) -> Self {
        assert!(n >= 1 && h >= 1);
        Self {
            n,
            h,
            time: 0,
            slots: (0..2 * h).map(|_| Slot::new(n)).collect(),
            prod: vec![vec![0; n * n]; h],
            s: vec![0; n * n],
            out: BoolMatrix::new(n),
            work: 0,
            phi_inc: vec![0; h],
            phi_dec: vec![0; h],
        }
    }

    /// Matrix dimension.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of terms.
    pub fn terms(&self) -> usize {
        self.h
    }

    fn slot_index(&self, var: Var) -> Result<usize> {
        if var.term < self.h && var.pos < 2 {
            Ok(2 * var.term + var.pos)
        } else {
            Err(Error::UnknownVariable {
                term: var.term,
                pos: var.pos,
            })
        }
    }

    fn check_delta(&self, delta: &BoolMatrix) -> Result<()> {
        if delta.n() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: delta.n(),
            });
        }
        Ok(())
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i < self.n {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange {
                index: i,
                n: self.n,
            })
        }
    }

    /// Assigns all `2h` variables (ordered `X1^0, X2^0, X1^1, ...`) and
    /// recomputes every counter exactly.
    pub fn init(&mut self, values: &[BoolMatrix]) -> Result<()> {
        if values.len() != 2 * self.h {
            return Err(Error::WrongArity {
                expected: 2 * self.h,
                got: values.len(),
            });
        }
        for v in values {
            self.check_delta(v)?;
        }
        self.time += 1;
        let n = self.n;
        for (slot, v) in self.slots.iter_mut().zip(values) {
            slot.assign(v, self.time);
        }
        self.s.iter_mut().for_each(|c| *c = 0);
        self.out.clear();
        for a in 0..self.h {
            let prod = &mut self.prod[a];
            prod.iter_mut().for_each(|c| *c = 0);
            let (x1, x2) = (&self.slots[2 * a].rows, &self.slots[2 * a + 1].rows);
            let mut total = 0u64;
            for x in 0..n {
                for y in x1.row_ones(x) {
                    for z in x2.row_ones(y) {
                        prod[x * n + z] += 1;
                        total += 1;
                    }
                }
            }
            self.work += total;
            self.phi_inc[a] += total;
            for (s, &c) in self.s.iter_mut().zip(prod.iter()) {
                if c > 0 {
                    *s += 1;
                }
            }
        }
        for x in 0..n {
            for z in 0..n {
                if self.s[x * n + z] > 0 {
                    self.out.set(x, z);
                }
            }
        }
        Ok(())
    }

    /// Row update: switches on row `i` of `delta` in `var` and accounts every
    /// witness through that row.
    pub fn set_row(&mut self, i: usize, delta: &BoolMatrix, var: Var) -> Result<BoolMatrix> {
        let mut change = BoolMatrix::new(self.n);
        self.set_row_into(i, delta, var, &mut change)?;
        Ok(change)
    }

    /// Column update: switches on column `i` of `delta` in `var` and accounts
    /// every witness through that column.
    pub fn set_col(&mut self, i: usize, delta: &BoolMatrix, var: Var) -> Result<BoolMatrix> {
        let mut change = BoolMatrix::new(self.n);
        self.set_col_into(i, delta, var, &mut change)?;
        Ok(change)
    }

    /// Lazy update: switches on the entries of `delta` in `var` without
    /// touching any counter.
    pub fn lazy_set(&mut self, delta: &BoolMatrix, var: Var) -> Result<()> {
        let slot = self.slot_index(var)?;
        self.check_delta(delta)?;
        self.time += 1;
        self.slots[slot].absorb_rows(delta, None, self.time);
        Ok(())
    }

    /// Switches off the entries of `delta`, which must be set in `var`, and
    /// withdraws every accounted witness that used one of them.
    pub fn reset(&mut self, delta: &BoolMatrix, var: Var) -> Result<BoolMatrix> {
        let mut change = BoolMatrix::new(self.n);
        self.reset_into(delta, var, &mut change)?;
        Ok(change)
    }

    /// Current looked-up matrix: `S[x, z] > 0`.
    pub fn lookup(&self) -> &BoolMatrix {
        &self.out
    }

    pub(crate) fn set_row_into(
        &mut self,
        i: usize,
        delta: &BoolMatrix,
        var: Var,
        change: &mut BoolMatrix,
    ) -> Result<()> {
        self.slot_index(var)?;
        self.check_delta(delta)?;
        self.check_index(i)?;
        self.time += 1;
        let time = self.time;
        let n = self.n;
        let a = var.term;
        let (left, right) = self.slots[2 * a..2 * a + 2].split_at_mut(1);
        let (s1, s2) = (&mut left[0], &mut right[0]);
        let mut c = Counters {
            n,
            prod: &mut self.prod[a],
            s: &mut self.s,
            out: &mut self.out,
            delta: change,
            phi_inc: &mut self.phi_inc[a],
            phi_dec: &mut self.phi_dec[a],
        };
        let mut work = 0u64;
        if var.pos == 0 {
            s1.absorb_rows(delta, Some(i), time);
            // Triples (i, y, z).
            let lr1 = s1.last_row[i];
            for y in s1.rows.row_ones(i) {
                let base = lr1.max(s1.last_col[y]).max(s2.last_row[y]);
                let lf1 = s1.last_flip[i * n + y];
                for z in s2.rows.row_ones(y) {
                    work += 1;
                    if lf1.max(s2.last_flip[y * n + z]) > base.max(s2.last_col[z]) {
                        c.inc(i, z);
                    }
                }
            }
            s1.last_row[i] = time;
            s1.row_recency.move_to_front(i);
        } else {
            s2.absorb_rows(delta, Some(i), time);
            // Triples (x, i, z).
            let lr2 = s2.last_row[i];
            let lc1 = s1.last_col[i];
            for x in s1.cols.row_ones(i) {
                let base = s1.last_row[x].max(lc1).max(lr2);
                let lf1 = s1.last_flip[x * n + i];
                for z in s2.rows.row_ones(i) {
                    work += 1;
                    if lf1.max(s2.last_flip[i * n + z]) > base.max(s2.last_col[z]) {
                        c.inc(x, z);
                    }
                }
            }
            s2.last_row[i] = time;
            s2.row_recency.move_to_front(i);
        }
        self.work += work;
        Ok(())
    }

    pub(crate) fn set_col_into(
        &mut self,
        i: usize,
        delta: &BoolMatrix,
        var: Var,
        change: &mut BoolMatrix,
    ) -> Result<()> {
        self.slot_index(var)?;
        self.check_delta(delta)?;
        self.check_index(i)?;
        self.time += 1;
        let time = self.time;
        let n = self.n;
        let a = var.term;
        let (left, right) = self.slots[2 * a..2 * a + 2].split_at_mut(1);
        let (s1, s2) = (&mut left[0], &mut right[0]);
        let mut c = Counters {
            n,
            prod: &mut self.prod[a],
            s: &mut self.s,
            out: &mut self.out,
            delta: change,
            phi_inc: &mut self.phi_inc[a],
            phi_dec: &mut self.phi_dec[a],
        };
        let mut work = 0u64;
        if var.pos == 0 {
            s1.absorb_col(delta, i, time);
            // Triples (x, i, z).
            let lc1 = s1.last_col[i];
            let lr2 = s2.last_row[i];
            for x in s1.cols.row_ones(i) {
                let base = s1.last_row[x].max(lc1).max(lr2);
                let lf1 = s1.last_flip[x * n + i];
                for z in s2.rows.row_ones(i) {
                    work += 1;
                    if lf1.max(s2.last_flip[i * n + z]) > base.max(s2.last_col[z]) {
                        c.inc(x, z);
                    }
                }
            }
            s1.last_col[i] = time;
            s1.col_recency.move_to_front(i);
        } else {
            s2.absorb_col(delta, i, time);
            // Triples (x, y, i).
            let lc2 = s2.last_col[i];
            for y in s2.cols.row_ones(i) {
                let lf2 = s2.last_flip[y * n + i];
                let base_y = s1.last_col[y].max(s2.last_row[y]).max(lc2);
                for x in s1.cols.row_ones(y) {
                    work += 1;
                    if s1.last_flip[x * n + y].max(lf2) > base_y.max(s1.last_row[x]) {
                        c.inc(x, i);
                    }
                }
            }
            s2.last_col[i] = time;
            s2.col_recency.move_to_front(i);
        }
        self.work += work;
        Ok(())
    }

    pub(crate) fn reset_into(
        &mut self,
        delta: &BoolMatrix,
        var: Var,
        change: &mut BoolMatrix,
    ) -> Result<()> {
        let slot = self.slot_index(var)?;
        self.check_delta(delta)?;
        if let Some((row, col)) = delta.first_outside(&self.slots[slot].rows) {
            return Err(Error::NotSubset { row, col });
        }
        if delta.is_zero() {
            return Ok(());
        }
        self.time += 1;
        let n = self.n;
        let a = var.term;
        let (left, right) = self.slots[2 * a..2 * a + 2].split_at_mut(1);
        let (s1, s2) = (&mut left[0], &mut right[0]);
        let mut c = Counters {
            n,
            prod: &mut self.prod[a],
            s: &mut self.s,
            out: &mut self.out,
            delta: change,
            phi_inc: &mut self.phi_inc[a],
            phi_dec: &mut self.phi_dec[a],
        };
        let mut work = 0u64;
        if var.pos == 0 {
            for (x, y) in delta.ones_iter() {
                let t = s1.last_flip[x * n + y];
                let base = s1.last_row[x].max(s1.last_col[y]).max(s2.last_row[y]);
                if base >= t {
                    for z in s2.rows.row_ones(y) {
                        work += 1;
                        if t.max(s2.last_flip[y * n + z]) <= base.max(s2.last_col[z]) {
                            c.dec(x, z);
                        }
                    }
                } else {
                    // Only columns of X2 touched since the flip can account
                    // a witness through (x, y).
                    for z in s2.col_recency.iter() {
                        let lc2 = s2.last_col[z];
                        if lc2 < t {
                            break;
                        }
                        work += 1;
                        if s2.rows.get(y, z) && s2.last_flip[y * n + z] <= lc2 {
                            c.dec(x, z);
                        }
                    }
                }
            }
            s1.remove(delta);
        } else {
            for (y, z) in delta.ones_iter() {
                let t = s2.last_flip[y * n + z];
                let base = s2.last_col[z].max(s2.last_row[y]).max(s1.last_col[y]);
                if base >= t {
                    for x in s1.cols.row_ones(y) {
                        work += 1;
                        if s1.last_flip[x * n + y].max(t) <= base.max(s1.last_row[x]) {
                            c.dec(x, z);
                        }
                    }
                } else {
                    for x in s1.row_recency.iter() {
                        let lr1 = s1.last_row[x];
                        if lr1 < t {
                            break;
                        }
                        work += 1;
                        if s1.rows.get(x, y) && s1.last_flip[x * n + y] <= lr1 {
                            c.dec(x, z);
                        }
                    }
                }
            }
            s2.remove(delta);
        }
        self.work += work;
        Ok(())
    }

    /// Current value of `var`.
    pub fn value(&self, var: Var) -> Result<&BoolMatrix> {
        Ok(&self.slots[self.slot_index(var)?].rows)
    }

    /// Flip time of entry `(x, y)` of `var`; meaningful only where the entry is 1.
    pub fn last_flip(&self, var: Var, x: usize, y: usize) -> u64 {
        self.slots[2 * var.term + var.pos].last_flip[x * self.n + y]
    }

    /// Time of the last row operation on row `i` of `var` (or of the last init).
    pub fn last_row(&self, var: Var, i: usize) -> u64 {
        self.slots[2 * var.term + var.pos].last_row[i]
    }

    /// Time of the last column operation on column `i` of `var` (or of the last init).
    pub fn last_col(&self, var: Var, i: usize) -> u64 {
        self.slots[2 * var.term + var.pos].last_col[i]
    }

    /// Witness counter `Prod_a[x, z]`.
    pub fn prod(&self, term: usize, x: usize, z: usize) -> u32 {
        self.prod[term][x * self.n + z]
    }

    /// Aggregate `S[x, z]`: number of terms with a positive counter.
    pub fn s(&self, x: usize, z: usize) -> u32 {
        self.s[x * self.n + z]
    }

    /// Current operation clock.
    pub fn time(&self) -> u64 {
        self.time
    }

    /// Potential `Φ_a = Σ Prod_a[x, z]` of term `a`.
    pub fn phi(&self, term: usize) -> u64 {
        self.prod[term].iter().map(|&c| c as u64).sum()
    }

    /// Cumulative counter increments of term `a` (init and set operations).
    pub fn phi_increments(&self, term: usize) -> u64 {
        self.phi_inc[term]
    }

    /// Cumulative counter decrements of term `a` (resets).
    pub fn phi_decrements(&self, term: usize) -> u64 {
        self.phi_dec[term]
    }

    /// Cumulative number of witness triples visited by all operations.
    pub fn work_units(&self) -> u64 {
        self.work
    }

    /// Evaluates the accounting predicate for witness `y` of `(x, z)` in term `a`.
    pub fn predicate(&self, term: usize, x: usize, y: usize, z: usize) -> bool {
        let n = self.n;
        let (s1, s2) = (&self.slots[2 * term], &self.slots[2 * term + 1]);
        let flip = s1.last_flip[x * n + y].max(s2.last_flip[y * n + z]);
        let touch = s1.last_row[x]
            .max(s1.last_col[y])
            .max(s2.last_row[y])
            .max(s2.last_col[z]);
        flip <= touch
    }

    /// Recounts every counter from the definition and reports the first
    /// discrepancy. Cost is `O(h n^3)`; intended for audits and tests.
    pub fn audit(&self) -> std::result::Result<(), String> {
        let n = self.n;
        let mut s = vec![0u32; n * n];
        for a in 0..self.h {
            let (x1, x2) = (&self.slots[2 * a].rows, &self.slots[2 * a + 1].rows);
            for x in 0..n {
                for z in 0..n {
                    let count = (0..n)
                        .filter(|&y| x1.get(x, y) && x2.get(y, z) && self.predicate(a, x, y, z))
                        .count() as u32;
                    if count != self.prod[a][x * n + z] {
                        return Err(format!(
                            "term {a}: counter at ({x},{z}) is {} but {count} witnesses are accounted",
                            self.prod[a][x * n + z]
                        ));
                    }
                    if count > 0 {
                        s[x * n + z] += 1;
                    }
                }
            }
        }
        for x in 0..n {
            for z in 0..n {
                if s[x * n + z] != self.s[x * n + z] {
                    return Err(format!("aggregate at ({x},{z}) disagrees"));
                }
                if self.out.get(x, z) != (s[x * n + z] > 0) {
                    return Err(format!("looked-up bit at ({x},{z}) disagrees"));
                }
            }
        }
        for slot in &self.slots {
            if slot.cols != slot.rows.transpose() {
                return Err("column mirror out of sync".into());
            }
        }
        Ok(())
    }
}
