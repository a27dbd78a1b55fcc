//! Closure maintenance through a recursive block decomposition.
//!
//! With `X` split into blocks `A, B, C, D` and the closure `Y = X*` into
//! blocks `E, F, G, H`, the closure satisfies
//!
//! ```text
//! P  = D*               Q = A + B P^2 C        R = D + C E1^2 B
//! E1 = Q*               H2 = R*
//! F1 = E1^2 B P         G1 = P C E1^2          H1 = P C E1^2 B P
//! E2 = E1 B H2^2 C E1   F2 = E1 B H2^2         G2 = H2^2 C E1
//! E = E1 + E2           F = F1 + F2            G = G1 + G2        H = H1 + H2
//! ```
//!
//! Each node keeps the twelve polynomials as [`PolyK`] instances and the
//! three closures `P`, `E1`, `H2` as child nodes of half the size. A centered
//! update in the upper half of the index range fully updates the first
//! branch (`Q, E1, F1, G1, H1, R`) and lazily records the changes in the
//! second (`H2, G2, F2, E2`); an update in the lower half does the converse
//! after updating `P`. `E, F, G, H` are rebuilt after every update.
//!
//! Every polynomial variable holds the current value of the matrix it is
//! bound to: changes that are only logged are inserted with `lazy_set`, and
//! the centered part of a change is then applied with `set_row`/`set_col`.
//!
//! A node that has received lazy insertions may under-report paths through
//! them. Before such a node serves a centered update it is rebuilt from its
//! input (see [`DivConClosure::rebuilds`]), so every centered update leaves
//! the node exact.

use crate::boolmat::{closure_oracle, BoolMatrix};
use crate::error::{Error, Result};
use crate::poly::{PolyK, Var};

/// Where the value of a polynomial variable comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Src {
    A,
    B,
    C,
    D,
    P,
    E1,
    H2,
    Poly(usize),
}

const Q: usize = 0;
const R: usize = 1;
const F1: usize = 2;
const G1: usize = 3;
const H1: usize = 4;
const E2: usize = 5;
const F2: usize = 6;
const G2: usize = 7;
const E: usize = 8;
const F: usize = 9;
const G: usize = 10;
const H: usize = 11;

/// Term degrees and variable bindings (in [`PolyK::vars`] order) of the
/// twelve polynomials, indexed by the constants above.
const SPECS: [(&[usize], &[Src]); 12] = {
    use Src::*;
    [
        (&[1, 4], &[A, B, P, P, C]),
        (&[1, 4], &[D, C, E1, E1, B]),
        (&[4], &[E1, E1, B, P]),
        (&[4], &[P, C, E1, E1]),
        (&[6], &[P, C, E1, E1, B, P]),
        (&[6], &[E1, B, H2, H2, C, E1]),
        (&[4], &[E1, B, H2, H2]),
        (&[4], &[H2, H2, C, E1]),
        (&[1, 1], &[E1, Poly(E2)]),
        (&[1, 1], &[Poly(F1), Poly(F2)]),
        (&[1, 1], &[Poly(G1), Poly(G2)]),
        (&[1, 1], &[Poly(H1), H2]),
    ]
};

/// Changes of the variable sources, looked up by [`Src`].
type Deltas<'a> = [(Src, &'a BoolMatrix)];

fn find<'a>(deltas: &Deltas<'a>, s: Src) -> Option<&'a BoolMatrix> {
    deltas.iter().find(|(k, _)| *k == s).map(|(_, d)| *d)
}

/// Entries of `before` missing from `after`, asserting nothing was gained.
fn lost(before: &BoolMatrix, after: &BoolMatrix) -> BoolMatrix {
    debug_assert!(after.is_subset_of(before), "a reset gained entries");
    before.minus(after)
}

/// Closure of a small matrix recomputed from scratch on every update.
#[derive(Clone, Debug)]
struct Leaf {
    x: BoolMatrix,
    y: BoolMatrix,
    pending: bool,
    work: u64,
}

impl Leaf {
    fn new(n: usize) -> Self {
        Self {
            x: BoolMatrix::new(n),
            y: BoolMatrix::identity(n),
            pending: false,
            work: 0,
        }
    }

    fn recompute(&mut self) -> BoolMatrix {
        let n = self.x.n() as u64;
        self.work += n * n * n;
        closure_oracle(&self.x)
    }
}

/// One level of the recursive decomposition.
#[derive(Clone, Debug)]
struct Inner {
    m: usize,
    a: BoolMatrix,
    b: BoolMatrix,
    c: BoolMatrix,
    d: BoolMatrix,
    y: BoolMatrix,
    p: Node,
    e1: Node,
    h2: Node,
    polys: Vec<PolyK>,
    vars: Vec<Vec<Var>>,
    pending: bool,
}

#[derive(Clone, Debug)]
enum Node {
    Leaf(Leaf),
    Inner(Box<Inner>),
}

/// Update policy and instrumentation shared by the whole tree.
#[derive(Clone, Copy, Debug, Default)]
struct Stats {
    rebuild_pending: bool,
    rebuilds: u64,
    rebuild_work: u64,
}

impl Node {
    fn new(n: usize, leaf: usize) -> Result<Self> {
        if n <= leaf || n == 1 {
            return Ok(Node::Leaf(Leaf::new(n)));
        }
        let m = n / 2;
        let mut polys = Vec::with_capacity(SPECS.len());
        let mut vars = Vec::with_capacity(SPECS.len());
        for (degrees, _) in SPECS {
            let p = PolyK::new(m, degrees)?;
            vars.push(p.vars());
            polys.push(p);
        }
        let mut inner = Inner {
            m,
            a: BoolMatrix::new(m),
            b: BoolMatrix::new(m),
            c: BoolMatrix::new(m),
            d: BoolMatrix::new(m),
            y: BoolMatrix::identity(n),
            p: Node::new(m, leaf)?,
            e1: Node::new(m, leaf)?,
            h2: Node::new(m, leaf)?,
            polys,
            vars,
            pending: false,
        };
        inner.init_star(&BoolMatrix::new(n))?;
        Ok(Node::Inner(Box::new(inner)))
    }

    fn y(&self) -> &BoolMatrix {
        match self {
            Node::Leaf(l) => &l.y,
            Node::Inner(i) => &i.y,
        }
    }

    fn x(&self) -> BoolMatrix {
        match self {
            Node::Leaf(l) => l.x.clone(),
            Node::Inner(i) => BoolMatrix::from_blocks(&i.a, &i.b, &i.c, &i.d),
        }
    }

    fn init_star(&mut self, z: &BoolMatrix) -> Result<()> {
        match self {
            Node::Leaf(l) => {
                l.x = z.clone();
                l.y = l.recompute();
                l.pending = false;
                Ok(())
            }
            Node::Inner(i) => i.init_star(z),
        }
    }

    /// Centered update at `i` with the entries of row and column `i` of `delta`.
    fn set_star(&mut self, i: usize, delta: &BoolMatrix, st: &mut Stats) -> Result<()> {
        match self {
            Node::Leaf(l) => {
                l.x.or_assign(&delta.cross_slab(i)?);
                l.y = l.recompute();
                l.pending = false;
                Ok(())
            }
            Node::Inner(inner) => inner.set_star(i, delta, st),
        }
    }

    fn lazy_set_star(&mut self, delta: &BoolMatrix) -> Result<()> {
        match self {
            Node::Leaf(l) => {
                if !delta.is_subset_of(&l.x) {
                    l.x.or_assign(delta);
                    l.pending = true;
                }
                Ok(())
            }
            Node::Inner(i) => i.lazy_set_star(delta),
        }
    }

    fn reset_star(&mut self, delta: &BoolMatrix, st: &mut Stats) -> Result<()> {
        match self {
            Node::Leaf(l) => {
                l.x.and_not_assign(delta);
                let fresh = l.recompute();
                l.y.and_assign(&fresh);
                Ok(())
            }
            Node::Inner(i) => i.reset_star(delta, st),
        }
    }

    /// Whether the input received lazy insertions since the last rebuild.
    fn has_pending(&self) -> bool {
        match self {
            Node::Leaf(l) => l.pending,
            Node::Inner(i) => i.pending,
        }
    }

    /// Feeds an arbitrary change of the input: the part off row and column
    /// `i` lazily, then the centered part. Returns the new 1's of the closure.
    fn absorb(&mut self, i: usize, delta: &BoolMatrix, st: &mut Stats) -> Result<BoolMatrix> {
        let before = self.y().clone();
        let centered = delta.cross_slab(i)?;
        let off = delta.minus(&centered);
        if !off.is_zero() {
            self.lazy_set_star(&off)?;
        }
        if st.rebuild_pending && self.has_pending() {
            let mut full = self.x();
            full.or_assign(&centered);
            let w0 = self.work_units();
            self.init_star(&full)?;
            st.rebuilds += 1;
            st.rebuild_work += self.work_units() - w0;
        } else {
            self.set_star(i, &centered, st)?;
        }
        Ok(self.y().minus(&before))
    }

    fn work_units(&self) -> u64 {
        match self {
            Node::Leaf(l) => l.work,
            Node::Inner(i) => {
                i.polys.iter().map(PolyK::work_units).sum::<u64>()
                    + i.p.work_units()
                    + i.e1.work_units()
                    + i.h2.work_units()
            }
        }
    }

    fn audit(&self, path: &str) -> std::result::Result<(), String> {
        match self {
            Node::Leaf(l) => {
                if !l.y.is_subset_of(&closure_oracle(&l.x)) {
                    return Err(format!("{path}: leaf reports a pair that is not reachable"));
                }
                Ok(())
            }
            Node::Inner(i) => i.audit(path),
        }
    }
}

impl Inner {
    fn src(&self, s: Src) -> &BoolMatrix {
        match s {
            Src::A => &self.a,
            Src::B => &self.b,
            Src::C => &self.c,
            Src::D => &self.d,
            Src::P => self.p.y(),
            Src::E1 => self.e1.y(),
            Src::H2 => self.h2.y(),
            Src::Poly(k) => self.polys[k].lookup(),
        }
    }

    fn poly_init(&mut self, k: usize) -> Result<()> {
        let values: Vec<BoolMatrix> = SPECS[k].1.iter().map(|&s| self.src(s).clone()).collect();
        self.polys[k].init(&values)
    }

    /// Lazy insertion of every listed change into all variables bound to it.
    fn poly_lazy(&mut self, k: usize, deltas: &Deltas) -> Result<()> {
        for (var, &s) in self.vars[k].iter().zip(SPECS[k].1) {
            if let Some(d) = find(deltas, s) {
                if !d.is_zero() {
                    self.polys[k].lazy_set(d, *var)?;
                }
            }
        }
        Ok(())
    }

    /// Full update at index `i`: lazy insertion of the whole change, then row
    /// and column updates on every bound variable. Returns the new 1's.
    fn poly_set(&mut self, k: usize, i: usize, deltas: &Deltas) -> Result<BoolMatrix> {
        let before = self.polys[k].lookup().clone();
        self.poly_lazy(k, deltas)?;
        for (var, &s) in self.vars[k].iter().zip(SPECS[k].1) {
            if let Some(d) = find(deltas, s) {
                self.polys[k].set_row(i, d, *var)?;
                self.polys[k].set_col(i, d, *var)?;
            }
        }
        Ok(self.polys[k].lookup().minus(&before))
    }

    /// Removes the listed changes from every bound variable. Returns the 1's
    /// lost by the polynomial.
    fn poly_reset(&mut self, k: usize, deltas: &Deltas) -> Result<BoolMatrix> {
        let before = self.polys[k].lookup().clone();
        for (var, &s) in self.vars[k].iter().zip(SPECS[k].1) {
            if let Some(d) = find(deltas, s) {
                if !d.is_zero() {
                    self.polys[k].reset(d, *var)?;
                }
            }
        }
        Ok(lost(&before, self.polys[k].lookup()))
    }

    fn rebuild_outputs(&mut self) -> Result<()> {
        for k in [E, F, G, H] {
            self.poly_init(k)?;
        }
        self.refresh_y();
        Ok(())
    }

    fn refresh_y(&mut self) {
        self.y = BoolMatrix::from_blocks(
            self.polys[E].lookup(),
            self.polys[F].lookup(),
            self.polys[G].lookup(),
            self.polys[H].lookup(),
        );
    }

    fn split(&self, x: &BoolMatrix) -> [BoolMatrix; 4] {
        let m = self.m;
        [
            x.block(0, 0, m),
            x.block(0, m, m),
            x.block(m, 0, m),
            x.block(m, m, m),
        ]
    }

    fn init_star(&mut self, z: &BoolMatrix) -> Result<()> {
        self.pending = false;
        let [a, b, c, d] = self.split(z);
        (self.a, self.b, self.c, self.d) = (a, b, c, d);
        self.p.init_star(&self.d.clone())?;
        self.poly_init(Q)?;
        self.e1.init_star(&self.polys[Q].lookup().clone())?;
        self.poly_init(R)?;
        self.h2.init_star(&self.polys[R].lookup().clone())?;
        for k in [F1, G1, H1, E2, F2, G2] {
            self.poly_init(k)?;
        }
        self.rebuild_outputs()
    }

    fn set_star(&mut self, i: usize, delta: &BoolMatrix, st: &mut Stats) -> Result<()> {
        let m = self.m;
        let cur = BoolMatrix::from_blocks(&self.a, &self.b, &self.c, &self.d);
        let fresh = delta.cross_slab(i)?.minus(&cur);
        let [da, db, dc, dd] = self.split(&fresh);
        self.a.or_assign(&da);
        self.b.or_assign(&db);
        self.c.or_assign(&dc);
        self.d.or_assign(&dd);
        if i < m {
            let dq = self.poly_set(Q, i, &[(Src::A, &da), (Src::B, &db), (Src::C, &dc)])?;
            let de1 = self.e1.absorb(i, &dq, st)?;
            let (e1, b, c) = ((Src::E1, &de1), (Src::B, &db), (Src::C, &dc));
            self.poly_set(F1, i, &[e1, b])?;
            self.poly_set(G1, i, &[c, e1])?;
            self.poly_set(H1, i, &[c, e1, b])?;
            let dr = self.poly_set(R, i, &[c, e1, b])?;
            self.h2.lazy_set_star(&dr)?;
            self.poly_lazy(G2, &[c, e1])?;
            self.poly_lazy(F2, &[e1, b])?;
            self.poly_lazy(E2, &[e1, b, c])?;
        } else {
            let j = i - m;
            let before = self.p.y().clone();
            self.p.set_star(j, &dd, st)?;
            let dp = self.p.y().minus(&before);
            let (b, c, d) = ((Src::B, &db), (Src::C, &dc), (Src::D, &dd));
            let dr = self.poly_set(R, j, &[b, c, d])?;
            let dh2 = self.h2.absorb(j, &dr, st)?;
            let h2 = (Src::H2, &dh2);
            self.poly_set(G2, j, &[h2, c])?;
            self.poly_set(F2, j, &[b, h2])?;
            self.poly_set(E2, j, &[b, h2, c])?;
            let p = (Src::P, &dp);
            let dq = self.poly_set(Q, j, &[b, p, c])?;
            self.e1.lazy_set_star(&dq)?;
            self.poly_lazy(F1, &[b, p])?;
            self.poly_lazy(G1, &[p, c])?;
            self.poly_lazy(H1, &[b, p, c])?;
        }
        self.rebuild_outputs()
    }

    fn lazy_set_star(&mut self, delta: &BoolMatrix) -> Result<()> {
        let cur = BoolMatrix::from_blocks(&self.a, &self.b, &self.c, &self.d);
        let fresh = delta.minus(&cur);
        if fresh.is_zero() {
            return Ok(());
        }
        self.pending = true;
        let [da, db, dc, dd] = self.split(&fresh);
        self.a.or_assign(&da);
        self.b.or_assign(&db);
        self.c.or_assign(&dc);
        self.d.or_assign(&dd);
        let (a, b, c, d) = ((Src::A, &da), (Src::B, &db), (Src::C, &dc), (Src::D, &dd));
        self.poly_lazy(Q, &[a, b, c])?;
        self.poly_lazy(R, &[b, c, d])?;
        self.poly_lazy(F1, &[b])?;
        self.poly_lazy(G1, &[c])?;
        self.poly_lazy(H1, &[b, c])?;
        self.poly_lazy(E2, &[b, c])?;
        self.poly_lazy(F2, &[b])?;
        self.poly_lazy(G2, &[c])?;
        self.p.lazy_set_star(&dd)
    }

    fn reset_star(&mut self, delta: &BoolMatrix, st: &mut Stats) -> Result<()> {
        let [da, db, dc, dd] = self.split(delta);
        self.a.and_not_assign(&da);
        self.b.and_not_assign(&db);
        self.c.and_not_assign(&dc);
        self.d.and_not_assign(&dd);
        let (a, b, c, d) = ((Src::A, &da), (Src::B, &db), (Src::C, &dc), (Src::D, &dd));

        let before = self.p.y().clone();
        self.p.reset_star(&dd, st)?;
        let dp = lost(&before, self.p.y());
        let p = (Src::P, &dp);

        let dq = self.poly_reset(Q, &[a, b, p, c])?;
        let before = self.e1.y().clone();
        self.e1.reset_star(&dq, st)?;
        let de1 = lost(&before, self.e1.y());
        let e1 = (Src::E1, &de1);

        let dr = self.poly_reset(R, &[d, c, e1, b])?;
        let before = self.h2.y().clone();
        self.h2.reset_star(&dr, st)?;
        let dh2 = lost(&before, self.h2.y());
        let h2 = (Src::H2, &dh2);

        let df1 = self.poly_reset(F1, &[e1, b, p])?;
        let dg1 = self.poly_reset(G1, &[p, c, e1])?;
        let dh1 = self.poly_reset(H1, &[p, c, e1, b])?;
        let de2 = self.poly_reset(E2, &[e1, b, h2, c])?;
        let df2 = self.poly_reset(F2, &[e1, b, h2])?;
        let dg2 = self.poly_reset(G2, &[h2, c, e1])?;
        self.poly_reset(E, &[e1, (Src::Poly(E2), &de2)])?;
        self.poly_reset(F, &[(Src::Poly(F1), &df1), (Src::Poly(F2), &df2)])?;
        self.poly_reset(G, &[(Src::Poly(G1), &dg1), (Src::Poly(G2), &dg2)])?;
        self.poly_reset(H, &[(Src::Poly(H1), &dh1), h2])?;
        self.refresh_y();
        Ok(())
    }

    fn audit(&self, path: &str) -> std::result::Result<(), String> {
        for (k, poly) in self.polys.iter().enumerate() {
            poly.audit().map_err(|e| format!("{path}/poly{k}: {e}"))?;
            for (var, &s) in self.vars[k].iter().zip(SPECS[k].1) {
                if poly.value(*var).map_err(|e| e.to_string())? != self.src(s) {
                    return Err(format!(
                        "{path}/poly{k}: variable {var:?} differs from its source"
                    ));
                }
            }
        }
        if self.p.x() != self.d {
            return Err(format!("{path}: input of P differs from D"));
        }
        if self.e1.x() != *self.polys[Q].lookup() {
            return Err(format!("{path}: input of E1 differs from Q"));
        }
        if self.h2.x() != *self.polys[R].lookup() {
            return Err(format!("{path}: input of H2 differs from R"));
        }
        let blocks = BoolMatrix::from_blocks(
            self.polys[E].lookup(),
            self.polys[F].lookup(),
            self.polys[G].lookup(),
            self.polys[H].lookup(),
        );
        if blocks != self.y {
            return Err(format!("{path}: output differs from E, F, G, H"));
        }
        let x = BoolMatrix::from_blocks(&self.a, &self.b, &self.c, &self.d);
        if !self.y.is_subset_of(&closure_oracle(&x)) {
            return Err(format!(
                "{path}: output reports a pair that is not reachable"
            ));
        }
        self.p.audit(&format!("{path}/P"))?;
        self.e1.audit(&format!("{path}/E1"))?;
        self.h2.audit(&format!("{path}/H2"))
    }
}

/// Fully dynamic closure of an `n x n` Boolean matrix by recursive block
/// decomposition.
///
/// Matrices whose dimension is not a power of two are padded with isolated
/// vertices. Blocks of dimension at most the leaf size are closed from
/// scratch on every update.
#[derive(Clone, Debug)]
pub struct DivConClosure {
    n: usize,
    size: usize,
    leaf_size: usize,
    root: Node,
    stats: Stats,
}

impl DivConClosure {
    /// Closure structure for `n` vertices with leaf size 1, initialised with
    /// the empty matrix.
    pub fn new(n: usize) -> Result<Self> {
        Self::with_leaf_size(n, 1)
    }

    /// Closure structure whose recursion stops at blocks of dimension at most
    /// `leaf_size`.
    pub fn with_leaf_size(n: usize, leaf_size: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("dimension must be positive".into()));
        }
        if leaf_size == 0 {
            return Err(Error::InvalidParameter("leaf size must be positive".into()));
        }
        let size = n.next_power_of_two();
        Ok(Self {
            n,
            size,
            leaf_size,
            root: Node::new(size, leaf_size)?,
            stats: Stats {
                rebuild_pending: true,
                ..Stats::default()
            },
        })
    }

    /// Chooses whether a node holding lazily inserted entries is rebuilt
    /// from its input before it serves a centered update (the default).
    /// Without rebuilding, paths through lazily inserted entries of inner
    /// nodes can stay unreported.
    pub fn set_rebuild_pending(&mut self, on: bool) {
        self.stats.rebuild_pending = on;
    }

    /// Number of vertices.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Leaf size of the recursion.
    pub fn leaf_size(&self) -> usize {
        self.leaf_size
    }

    /// Current input matrix.
    pub fn matrix(&self) -> BoolMatrix {
        self.root.x().truncated(self.n)
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

    /// Initialises every object from scratch with input `z`.
    pub fn init_star(&mut self, z: &BoolMatrix) -> Result<()> {
        self.check_dim(z)?;
        self.root.init_star(&z.padded(self.size))
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
        let centered = delta.padded(self.size).cross_slab(i)?;
        self.root.absorb(i, &centered, &mut self.stats)?;
        Ok(())
    }

    /// Inserts the entries of `delta` without propagating them; the
    /// maintained closure may under-report until a later update reveals them.
    pub fn lazy_set_star(&mut self, delta: &BoolMatrix) -> Result<()> {
        self.check_dim(delta)?;
        self.root.lazy_set_star(&delta.padded(self.size))
    }

    /// Removes the entries of `delta`, which must all be present.
    pub fn reset_star(&mut self, delta: &BoolMatrix) -> Result<()> {
        self.check_dim(delta)?;
        let delta = delta.padded(self.size);
        if let Some((row, col)) = delta.first_outside(&self.root.x()) {
            return Err(Error::NotSubset { row, col });
        }
        if delta.is_zero() {
            return Ok(());
        }
        self.root.reset_star(&delta, &mut self.stats)
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
        Ok(self.root.y().get(x, y))
    }

    /// The maintained closure matrix.
    pub fn closure(&self) -> BoolMatrix {
        self.root.y().truncated(self.n)
    }

    /// Cumulative witness triples visited by all polynomials plus the cubic
    /// cost charged for every leaf recomputation.
    pub fn work_units(&self) -> u64 {
        self.root.work_units()
    }

    /// Number of nodes rebuilt because they held lazily inserted entries.
    pub fn rebuilds(&self) -> u64 {
        self.stats.rebuilds
    }

    /// Work units spent in those rebuilds (included in [`Self::work_units`]).
    pub fn rebuild_work_units(&self) -> u64 {
        self.stats.rebuild_work
    }

    /// Checks counters and slot consistency of every polynomial, that every
    /// child closure is fed the current value of its polynomial, that outputs
    /// match `E, F, G, H`, and that no node reports an unreachable pair.
    pub fn audit(&self) -> std::result::Result<(), String> {
        self.root.audit("root")
    }
}

/// Tests whether `delta_star = (x + delta)* - x*` is `i`-transitive and
/// `i`-complete with respect to `x*`, for an `i`-centered `delta`.
///
/// Both properties are equalities of update matrices, which only matter up
/// to entries already present in `x*`: `i`-transitivity is checked as
/// `x* + I·x* = x* + I` and `x* + x*·J = x* + J`, `i`-completeness as
/// `x* + J·I + x*·I + J·x* = x* + delta_star`, where `I` and `J` are row and
/// column `i` of `delta_star`.
pub fn delta_props_check(x: &BoolMatrix, delta: &BoolMatrix, i: usize) -> Result<(bool, bool)> {
    x.check_same_dim(delta)?;
    let before = closure_oracle(x);
    let after = closure_oracle(&x.add(&delta.cross_slab(i)?)?);
    let ds = after.minus(&before);
    delta_props_at(&before, &ds, i)
}

/// Tests `i`-transitivity and `i`-completeness of `ds` with respect to `x`
/// (up to entries of `x`, see [`delta_props_check`]).
pub fn delta_props_at(x: &BoolMatrix, ds: &BoolMatrix, i: usize) -> Result<(bool, bool)> {
    let row = ds.row_slab(i)?;
    let col = ds.col_slab(i)?;
    let plus = |m: &BoolMatrix| x.add(m);
    let transitive = plus(&row.mul(x)?)? == plus(&row)? && plus(&x.mul(&col)?)? == plus(&col)?;
    let complete_lhs = col.mul(&row)?.add(&x.mul(&row)?)?.add(&col.mul(x)?)?;
    let complete = plus(&complete_lhs)? == plus(ds)?;
    Ok((transitive, complete))
}

/// The squaring identity: for a closed `x` and an `i`-transitive,
/// `i`-complete `ds`, `(x + I + J)^2` equals `x + ds`. Returns whether it holds.
pub fn squaring_identity_holds(x: &BoolMatrix, ds: &BoolMatrix, i: usize) -> Result<bool> {
    let base = x.add(&ds.cross_slab(i)?)?;
    Ok(base.mul(&base)? == x.add(ds)?)
}
