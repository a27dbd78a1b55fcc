//! Lazily maintained sums of products of arbitrary degree.
//!
//! A term `X_1 ⋯ X_k` with `k >= 3` is split at every position `b` into a
//! prefix `L_b = X_1 ⋯ X_b` and a suffix `R_b = X_{b+1} ⋯ X_k` (with empty
//! products equal to the identity), so that the term equals each `L_b · R_b`.
//! Prefixes are built right to left by the chain `L_{b,j} = X_{b-j} · L_{b,j-1}`
//! and suffixes left to right by `R_{b,j} = R_{b,j-1} · X_{b+1+j}`; every chain
//! link is a single-term [`PolyDeg2`]. A top-level [`PolyDeg2`] sums all the
//! products `L_b · R_b`.
//!
//! A column update of `X_b` is pushed up the prefix chain of `L_b` as column
//! updates, a row update of `X_b` up the suffix chain of `R_{b-1}` as row
//! updates. The opposite chain is refreshed with an empty update on the same
//! index so that witnesses through that index become accounted, and every
//! other copy of `X_b` receives a lazy insertion. Terms of degree 1 and 2 are
//! placed directly in the top-level polynomial (a degree-1 term as `X · I`).

use crate::boolmat::BoolMatrix;
use crate::error::{Error, Result};
use crate::poly::{PolyDeg2, Var};

/// Where the value of a chain-link variable comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Src {
    Var(usize),
    Node(usize),
    Identity,
}

/// A variable slot inside one of the internal degree-2 structures.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum SlotRef {
    Node { id: usize, pos: usize },
    Top { pair: usize, pos: usize },
}

#[derive(Clone, Copy, Debug)]
enum Kind {
    Row,
    Col,
}

#[derive(Clone, Debug)]
enum Layout {
    /// Degree 1 or 2: one top-level pair.
    Direct { pair: usize },
    /// Degree `k`: pairs `pair0 ..= pair0 + k`, prefix links `l[b][j]` and
    /// suffix links `r[b][j]` (index `j = 0` unused).
    Chain {
        pair0: usize,
        l: Vec<Vec<usize>>,
        r: Vec<Vec<usize>>,
    },
}

/// Sum of products `Σ_a X_1^a ⋯ X_{k_a}^a` of distinct Boolean matrix
/// variables, supporting the same lazy operations as [`PolyDeg2`].
///
/// Variables are addressed by [`Var`] with `term = a` and `pos` in
/// `0..k_a` (0-based position inside the product).
#[derive(Clone, Debug)]
pub struct PolyK {
    n: usize,
    degrees: Vec<usize>,
    offsets: Vec<usize>,
    values: Vec<BoolMatrix>,
    nodes: Vec<PolyDeg2>,
    node_src: Vec<[Src; 2]>,
    node_feed: Vec<SlotRef>,
    top: PolyDeg2,
    top_src: Vec<[Src; 2]>,
    var_slots: Vec<Vec<SlotRef>>,
    layouts: Vec<Layout>,
}

impl PolyK {
    /// Polynomial whose term `a` is a product of `degrees[a]` variables.
    pub fn new(n: usize, degrees: &[usize]) -> Result<Self> {
        Self::build(n, degrees, 3)
    }

    /// Polynomial with `h` terms of degree `k` each.
    pub fn uniform(n: usize, h: usize, k: usize) -> Result<Self> {
        Self::new(n, &vec![k; h])
    }

    /// Like [`PolyK::new`], but terms of degree 2 are also decomposed into
    /// prefix/suffix chains instead of being placed in the top structure.
    pub fn new_decomposed(n: usize, degrees: &[usize]) -> Result<Self> {
        Self::build(n, degrees, 2)
    }

    fn build(n: usize, degrees: &[usize], chain_from: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("dimension must be positive".into()));
        }
        if degrees.is_empty() || degrees.contains(&0) {
            return Err(Error::InvalidParameter(
                "every polynomial needs at least one term of positive degree".into(),
            ));
        }
        let mut offsets = Vec::with_capacity(degrees.len());
        let mut total = 0;
        for &k in degrees {
            offsets.push(total);
            total += k;
        }
        let mut node_src: Vec<[Src; 2]> = Vec::new();
        let mut node_feed: Vec<SlotRef> = Vec::new();
        let mut top_src: Vec<[Src; 2]> = Vec::new();
        let mut layouts = Vec::with_capacity(degrees.len());
        for (t, &k) in degrees.iter().enumerate() {
            let v = |p: usize| Src::Var(offsets[t] + p - 1);
            if k < chain_from {
                let pair = top_src.len();
                top_src.push(if k == 1 {
                    [v(1), Src::Identity]
                } else {
                    [v(1), v(2)]
                });
                layouts.push(Layout::Direct { pair });
                continue;
            }
            let pair0 = top_src.len();
            let mut l = vec![Vec::new(); k + 1];
            for (b, lb) in l.iter_mut().enumerate().skip(2) {
                lb.push(usize::MAX);
                for j in 1..b {
                    let id = node_src.len();
                    let second = if j == 1 { v(b) } else { Src::Node(lb[j - 1]) };
                    node_src.push([v(b - j), second]);
                    node_feed.push(if j + 1 < b {
                        SlotRef::Node { id: id + 1, pos: 1 }
                    } else {
                        SlotRef::Top {
                            pair: pair0 + b,
                            pos: 0,
                        }
                    });
                    lb.push(id);
                }
            }
            let mut r = vec![Vec::new(); k + 1];
            for (b, rb) in r.iter_mut().enumerate().take(k - 1) {
                rb.push(usize::MAX);
                let len = k - b - 1;
                for j in 1..=len {
                    let id = node_src.len();
                    let first = if j == 1 {
                        v(b + 1)
                    } else {
                        Src::Node(rb[j - 1])
                    };
                    node_src.push([first, v(b + 1 + j)]);
                    node_feed.push(if j < len {
                        SlotRef::Node { id: id + 1, pos: 0 }
                    } else {
                        SlotRef::Top {
                            pair: pair0 + b,
                            pos: 1,
                        }
                    });
                    rb.push(id);
                }
            }
            for b in 0..=k {
                let left = match b {
                    0 => Src::Identity,
                    1 => v(1),
                    _ => Src::Node(l[b][b - 1]),
                };
                let right = if b == k {
                    Src::Identity
                } else if b == k - 1 {
                    v(k)
                } else {
                    Src::Node(r[b][k - b - 1])
                };
                top_src.push([left, right]);
            }
            layouts.push(Layout::Chain { pair0, l, r });
        }
        let mut var_slots = vec![Vec::new(); total];
        for (id, src) in node_src.iter().enumerate() {
            for (pos, s) in src.iter().enumerate() {
                if let Src::Var(v) = s {
                    var_slots[*v].push(SlotRef::Node { id, pos });
                }
            }
        }
        for (pair, src) in top_src.iter().enumerate() {
            for (pos, s) in src.iter().enumerate() {
                if let Src::Var(v) = s {
                    var_slots[*v].push(SlotRef::Top { pair, pos });
                }
            }
        }
        let mut poly = Self {
            n,
            degrees: degrees.to_vec(),
            offsets,
            values: vec![BoolMatrix::new(n); total],
            nodes: (0..node_src.len()).map(|_| PolyDeg2::new(n, 1)).collect(),
            node_src,
            node_feed,
            top: PolyDeg2::new(n, top_src.len()),
            top_src,
            var_slots,
            layouts,
        };
        let zeros = vec![BoolMatrix::new(n); total];
        poly.init(&zeros)?;
        Ok(poly)
    }

    /// Matrix dimension.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Degrees of the terms.
    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    /// Total number of variables.
    pub fn num_vars(&self) -> usize {
        self.values.len()
    }

    /// Variable identifiers in the order expected by [`PolyK::init`].
    pub fn vars(&self) -> Vec<Var> {
        let mut out = Vec::with_capacity(self.values.len());
        for (term, &k) in self.degrees.iter().enumerate() {
            for pos in 0..k {
                out.push(Var { term, pos });
            }
        }
        out
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

    fn check(&self, delta: &BoolMatrix) -> Result<()> {
        if delta.n() == self.n {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.n,
                got: delta.n(),
            })
        }
    }

    fn source_value(&self, src: Src) -> BoolMatrix {
        match src {
            Src::Var(v) => self.values[v].clone(),
            Src::Node(id) => self.nodes[id].lookup().clone(),
            Src::Identity => BoolMatrix::identity(self.n),
        }
    }

    /// Assigns every variable (in the order of [`PolyK::vars`]) and rebuilds
    /// all chain links and the top structure exactly.
    pub fn init(&mut self, values: &[BoolMatrix]) -> Result<()> {
        if values.len() != self.values.len() {
            return Err(Error::WrongArity {
                expected: self.values.len(),
                got: values.len(),
            });
        }
        for v in values {
            self.check(v)?;
        }
        self.values = values.to_vec();
        for id in 0..self.nodes.len() {
            let [a, b] = self.node_src[id];
            let pair = [self.source_value(a), self.source_value(b)];
            self.nodes[id].init(&pair)?;
        }
        let mut all = Vec::with_capacity(2 * self.top_src.len());
        for &[a, b] in &self.top_src {
            all.push(self.source_value(a));
            all.push(self.source_value(b));
        }
        self.top.init(&all)
    }

    /// Row update of `var` with row `i` of `delta`. Returns the new 1's of the
    /// looked-up matrix.
    pub fn set_row(&mut self, i: usize, delta: &BoolMatrix, var: Var) -> Result<BoolMatrix> {
        self.set_line(Kind::Row, i, delta, var)
    }

    /// Column update of `var` with column `i` of `delta`. Returns the new 1's
    /// of the looked-up matrix.
    pub fn set_col(&mut self, i: usize, delta: &BoolMatrix, var: Var) -> Result<BoolMatrix> {
        self.set_line(Kind::Col, i, delta, var)
    }

    /// Lazy insertion of the entries of `delta` into `var`; no counter changes.
    pub fn lazy_set(&mut self, delta: &BoolMatrix, var: Var) -> Result<()> {
        let v = self.flat(var)?;
        self.check(delta)?;
        let fresh = delta.minus(&self.values[v]);
        if fresh.is_zero() {
            return Ok(());
        }
        self.values[v].or_assign(&fresh);
        for slot in self.var_slots[v].clone() {
            self.lazy_slot(slot, &fresh)?;
        }
        Ok(())
    }

    /// Removes the entries of `delta` (which must be set in `var`) and
    /// propagates the resulting decreases through the chains. Returns the 1's
    /// lost by the looked-up matrix.
    pub fn reset(&mut self, delta: &BoolMatrix, var: Var) -> Result<BoolMatrix> {
        let v = self.flat(var)?;
        self.check(delta)?;
        if let Some((row, col)) = delta.first_outside(&self.values[v]) {
            return Err(Error::NotSubset { row, col });
        }
        let mut change = BoolMatrix::new(self.n);
        if delta.is_zero() {
            return Ok(change);
        }
        self.values[v].and_not_assign(delta);
        for slot in self.var_slots[v].clone() {
            self.reset_slot(slot, delta.clone(), &mut change)?;
        }
        Ok(change)
    }

    /// Current looked-up matrix.
    pub fn lookup(&self) -> &BoolMatrix {
        self.top.lookup()
    }

    /// Current value of `var`.
    pub fn value(&self, var: Var) -> Result<&BoolMatrix> {
        Ok(&self.values[self.flat(var)?])
    }

    /// Cumulative witness triples visited by every internal structure.
    pub fn work_units(&self) -> u64 {
        self.top.work_units() + self.nodes.iter().map(PolyDeg2::work_units).sum::<u64>()
    }

    /// Number of internal degree-2 structures (chain links plus the top).
    pub fn num_structures(&self) -> usize {
        self.nodes.len() + 1
    }

    /// The top-level structure summing the prefix/suffix products.
    pub fn top(&self) -> &PolyDeg2 {
        &self.top
    }

    /// Verifies the witness counters of every internal structure and that
    /// every slot holds the current value of its source.
    pub fn audit(&self) -> std::result::Result<(), String> {
        for (id, node) in self.nodes.iter().enumerate() {
            node.audit().map_err(|e| format!("chain link {id}: {e}"))?;
            for pos in 0..2 {
                let have = node
                    .value(Var { term: 0, pos })
                    .map_err(|e| e.to_string())?;
                if *have != self.source_value(self.node_src[id][pos]) {
                    return Err(format!("chain link {id} slot {pos} is stale"));
                }
            }
        }
        self.top.audit().map_err(|e| format!("top: {e}"))?;
        for (pair, src) in self.top_src.iter().enumerate() {
            for (pos, &s) in src.iter().enumerate() {
                let have = self
                    .top
                    .value(Var { term: pair, pos })
                    .map_err(|e| e.to_string())?;
                if *have != self.source_value(s) {
                    return Err(format!("top pair {pair} slot {pos} is stale"));
                }
            }
        }
        Ok(())
    }

    fn set_line(
        &mut self,
        kind: Kind,
        i: usize,
        delta: &BoolMatrix,
        var: Var,
    ) -> Result<BoolMatrix> {
        let v = self.flat(var)?;
        self.check(delta)?;
        if i >= self.n {
            return Err(Error::IndexOutOfRange {
                index: i,
                n: self.n,
            });
        }
        let fresh = match kind {
            Kind::Row => delta.row_slab(i)?,
            Kind::Col => delta.col_slab(i)?,
        }
        .minus(&self.values[v]);
        self.values[v].or_assign(&fresh);
        let mut change = BoolMatrix::new(self.n);
        let k = self.degrees[var.term];
        let b = var.pos + 1;
        let (main, reveal) = match &self.layouts[var.term] {
            Layout::Direct { pair } => {
                let pos = if k == 1 { 0 } else { var.pos };
                (SlotRef::Top { pair: *pair, pos }, None)
            }
            Layout::Chain { pair0, l, r } => match kind {
                Kind::Col => {
                    let main = if b >= 2 {
                        SlotRef::Node {
                            id: l[b][1],
                            pos: 1,
                        }
                    } else {
                        SlotRef::Top {
                            pair: pair0 + 1,
                            pos: 0,
                        }
                    };
                    let reveal = if b + 2 <= k {
                        Some(SlotRef::Node {
                            id: r[b][1],
                            pos: 0,
                        })
                    } else if b + 1 == k {
                        Some(SlotRef::Top {
                            pair: pair0 + b,
                            pos: 1,
                        })
                    } else {
                        None
                    };
                    (main, reveal)
                }
                Kind::Row => {
                    let main = if b < k {
                        SlotRef::Node {
                            id: r[b - 1][1],
                            pos: 0,
                        }
                    } else {
                        SlotRef::Top {
                            pair: pair0 + k - 1,
                            pos: 1,
                        }
                    };
                    let reveal = if b >= 3 {
                        Some(SlotRef::Node {
                            id: l[b - 1][1],
                            pos: 1,
                        })
                    } else if b == 2 {
                        Some(SlotRef::Top {
                            pair: pair0 + 1,
                            pos: 0,
                        })
                    } else {
                        None
                    };
                    (main, reveal)
                }
            },
        };
        for slot in self.var_slots[v].clone() {
            if slot != main {
                self.lazy_slot(slot, &fresh)?;
            }
        }
        self.propagate(main, kind, i, fresh, &mut change)?;
        if let Some(slot) = reveal {
            let other = match kind {
                Kind::Row => Kind::Col,
                Kind::Col => Kind::Row,
            };
            self.propagate(slot, other, i, BoolMatrix::new(self.n), &mut change)?;
        }
        Ok(change)
    }

    /// Applies a row or column update to `slot` and carries the resulting
    /// change of each chain link to the slot it feeds, up to the top.
    fn propagate(
        &mut self,
        mut slot: SlotRef,
        kind: Kind,
        i: usize,
        mut delta: BoolMatrix,
        change: &mut BoolMatrix,
    ) -> Result<()> {
        loop {
            match slot {
                SlotRef::Node { id, pos } => {
                    let mut next = BoolMatrix::new(self.n);
                    let var = Var { term: 0, pos };
                    match kind {
                        Kind::Row => self.nodes[id].set_row_into(i, &delta, var, &mut next)?,
                        Kind::Col => self.nodes[id].set_col_into(i, &delta, var, &mut next)?,
                    }
                    slot = self.node_feed[id];
                    delta = next;
                }
                SlotRef::Top { pair, pos } => {
                    let var = Var { term: pair, pos };
                    match kind {
                        Kind::Row => self.top.set_row_into(i, &delta, var, change)?,
                        Kind::Col => self.top.set_col_into(i, &delta, var, change)?,
                    }
                    return Ok(());
                }
            }
        }
    }

    fn lazy_slot(&mut self, slot: SlotRef, delta: &BoolMatrix) -> Result<()> {
        match slot {
            SlotRef::Node { id, pos } => self.nodes[id].lazy_set(delta, Var { term: 0, pos }),
            SlotRef::Top { pair, pos } => self.top.lazy_set(delta, Var { term: pair, pos }),
        }
    }

    fn reset_slot(
        &mut self,
        slot: SlotRef,
        delta: BoolMatrix,
        change: &mut BoolMatrix,
    ) -> Result<()> {
        match slot {
            SlotRef::Node { id, pos } => {
                let mut lost = BoolMatrix::new(self.n);
                self.nodes[id].reset_into(&delta, Var { term: 0, pos }, &mut lost)?;
                if lost.is_zero() {
                    Ok(())
                } else {
                    self.reset_slot(self.node_feed[id], lost, change)
                }
            }
            SlotRef::Top { pair, pos } => {
                self.top.reset_into(&delta, Var { term: pair, pos }, change)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(n: usize, e: &[(usize, usize)]) -> BoolMatrix {
        BoolMatrix::from_entries(n, e.iter().copied()).unwrap()
    }

    fn exact(p: &PolyK) -> BoolMatrix {
        let n = p.n();
        let mut out = BoolMatrix::new(n);
        for (term, &k) in p.degrees().iter().enumerate() {
            let mut acc = BoolMatrix::identity(n);
            for pos in 0..k {
                acc = acc.mul(p.value(Var { term, pos }).unwrap()).unwrap();
            }
            out.or_assign(&acc);
        }
        out
    }

    #[test]
    fn chain_counts() {
        let p = PolyK::uniform(4, 1, 4).unwrap();
        // Prefix links 1+2+3, suffix links 3+2+1, plus the top.
        assert_eq!(p.num_structures(), 13);
        let q = PolyK::new(4, &[1, 2]).unwrap();
        assert_eq!(q.num_structures(), 1);
    }

    #[test]
    fn init_is_exact() {
        let n = 5;
        let mut p = PolyK::new(n, &[3, 1]).unwrap();
        let vals = vec![
            m(n, &[(0, 1), (3, 3)]),
            m(n, &[(1, 2), (3, 4)]),
            m(n, &[(2, 4), (4, 0)]),
            m(n, &[(2, 2)]),
        ];
        p.init(&vals).unwrap();
        assert_eq!(p.lookup(), &exact(&p));
        p.audit().unwrap();
    }

    #[test]
    fn row_and_column_updates_stay_exact_without_lazy_ops() {
        let n = 4;
        let mut p = PolyK::uniform(n, 1, 3).unwrap();
        let full = BoolMatrix::ones(n);
        for (step, var) in p.vars().into_iter().cycle().take(9).enumerate() {
            let i = step % n;
            p.set_row(i, &full, var).unwrap();
            assert_eq!(p.lookup(), &exact(&p));
            p.set_col((i + 1) % n, &full, var).unwrap();
            assert_eq!(p.lookup(), &exact(&p));
            p.audit().unwrap();
        }
    }

    #[test]
    fn reset_returns_to_previous_value() {
        let n = 4;
        let mut p = PolyK::uniform(n, 1, 3).unwrap();
        let vals = vec![m(n, &[(0, 1)]), m(n, &[(1, 2)]), BoolMatrix::new(n)];
        p.init(&vals).unwrap();
        let before = p.lookup().clone();
        let var = Var { term: 0, pos: 2 };
        let add = m(n, &[(2, 3)]);
        let gained = p.set_row(2, &add, var).unwrap();
        assert_eq!(gained, m(n, &[(0, 3)]));
        let lost = p.reset(&add, var).unwrap();
        assert_eq!(lost, m(n, &[(0, 3)]));
        assert_eq!(p.lookup(), &before);
        p.audit().unwrap();
    }
}
