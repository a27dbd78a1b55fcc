//! Dynamic directed graphs with reachability queries.
//!
//! A [`DynGraph`] has a fixed vertex set `1..=n` and supports initialisation
//! with an edge set, insertion of a set of edges all incident to one vertex,
//! deletion of an edge set and reachability queries. The closure is
//! maintained by one of several [`Backend`]s. Vertex identifiers are 1-based;
//! matrices returned by [`DynGraph::closure`] are 0-based.

use std::fmt;
use std::str::FromStr;

use crate::boolmat::{closure_oracle, BoolMatrix};
use crate::closure_divcon::DivConClosure;
use crate::closure_log::LogClosure;
use crate::dag_counter::{random_prime, DagCounter, DEFAULT_EPSILON};
use crate::error::{Error, Result};

/// Closure maintenance strategy behind a [`DynGraph`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Backend {
    /// Logarithmic tower of degree-3 polynomials.
    Log,
    /// Recursive block decomposition.
    DivCon,
    /// Path counting modulo a random prime; acyclic graphs only.
    DagCounting,
    /// Closure recomputed from scratch after every update.
    OracleNaive,
}

impl Backend {
    /// All backends, in a fixed order.
    pub const ALL: [Backend; 4] = [
        Backend::Log,
        Backend::DivCon,
        Backend::DagCounting,
        Backend::OracleNaive,
    ];

    /// Canonical lower-case name.
    pub fn name(self) -> &'static str {
        match self {
            Backend::Log => "log",
            Backend::DivCon => "divcon",
            Backend::DagCounting => "dag",
            Backend::OracleNaive => "oracle",
        }
    }
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Backend {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "log" => Ok(Backend::Log),
            "divcon" => Ok(Backend::DivCon),
            "dag" | "dag-counting" | "dag_counting" => Ok(Backend::DagCounting),
            "oracle" | "oracle-naive" | "oracle_naive" | "naive" => Ok(Backend::OracleNaive),
            other => Err(Error::InvalidParameter(format!(
                "unknown backend '{other}'"
            ))),
        }
    }
}

/// Construction parameters of the backends that take any.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GraphOptions {
    /// Seed of the random prime of the counting backend.
    pub seed: u64,
    /// Buffering exponent of the counting backend.
    pub epsilon: f64,
    /// Explicit prime for the counting backend, overriding the random one.
    pub prime: Option<u64>,
    /// Leaf size of the divide-and-conquer backend.
    pub leaf_size: usize,
}

impl Default for GraphOptions {
    fn default() -> Self {
        Self {
            seed: 0,
            epsilon: DEFAULT_EPSILON,
            prime: None,
            leaf_size: 1,
        }
    }
}

#[derive(Clone, Debug)]
enum State {
    Log(LogClosure),
    DivCon(DivConClosure),
    Dag(DagCounter),
    Naive { closure: BoolMatrix, work: u64 },
}

/// Directed graph on vertices `1..=n` with a maintained transitive closure.
#[derive(Clone, Debug)]
pub struct DynGraph {
    n: usize,
    backend: Backend,
    options: GraphOptions,
    edges: BoolMatrix,
    state: State,
    retired_work: u64,
}

impl DynGraph {
    /// Empty graph on `n` vertices with default options.
    pub fn new(n: usize, backend: Backend) -> Result<Self> {
        Self::with_options(n, backend, GraphOptions::default())
    }

    /// Empty graph on `n` vertices.
    pub fn with_options(n: usize, backend: Backend, options: GraphOptions) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter(
                "a graph needs at least one vertex".into(),
            ));
        }
        let state = Self::fresh_state(n, backend, &options)?;
        Ok(Self {
            n,
            backend,
            options,
            edges: BoolMatrix::new(n),
            state,
            retired_work: 0,
        })
    }

    fn fresh_state(n: usize, backend: Backend, o: &GraphOptions) -> Result<State> {
        Ok(match backend {
            Backend::Log => State::Log(LogClosure::new(n)?),
            Backend::DivCon => State::DivCon(DivConClosure::with_leaf_size(n, o.leaf_size)?),
            Backend::DagCounting => {
                let p = o.prime.unwrap_or_else(|| random_prime(o.seed));
                State::Dag(DagCounter::with_params(n, o.epsilon, Some(p))?)
            }
            Backend::OracleNaive => State::Naive {
                closure: BoolMatrix::identity(n),
                work: 0,
            },
        })
    }

    /// Number of vertices.
    pub fn n(&self) -> usize {
        self.n
    }

    /// The backend in use.
    pub fn backend(&self) -> Backend {
        self.backend
    }

    /// The prime of the counting backend, if that backend is in use.
    pub fn prime(&self) -> Option<u64> {
        match &self.state {
            State::Dag(d) => Some(d.prime()),
            _ => None,
        }
    }

    /// Whether `(u, v)` is an edge.
    pub fn has_edge(&self, u: usize, v: usize) -> Result<bool> {
        let (a, b) = self.edge_index(u, v)?;
        Ok(self.edges.get(a, b))
    }

    /// All edges (1-based) in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.edges
            .ones_iter()
            .map(|(a, b)| (a + 1, b + 1))
            .collect()
    }

    /// Adjacency matrix (0-based).
    pub fn adjacency(&self) -> &BoolMatrix {
        &self.edges
    }

    fn vertex(&self, v: usize) -> Result<usize> {
        if (1..=self.n).contains(&v) {
            Ok(v - 1)
        } else {
            Err(Error::IndexOutOfRange {
                index: v,
                n: self.n,
            })
        }
    }

    fn edge_index(&self, u: usize, v: usize) -> Result<(usize, usize)> {
        Ok((self.vertex(u)?, self.vertex(v)?))
    }

    fn edge_matrix(&self, edges: &[(usize, usize)]) -> Result<BoolMatrix> {
        let mut m = BoolMatrix::new(self.n);
        for &(u, v) in edges {
            let (a, b) = self.edge_index(u, v)?;
            m.set(a, b);
        }
        Ok(m)
    }

    /// Replaces the edge set with `edges`, discarding all previous state.
    pub fn init(&mut self, edges: &[(usize, usize)]) -> Result<()> {
        let m = self.edge_matrix(edges)?;
        let mut state = Self::fresh_state(self.n, self.backend, &self.options)?;
        match &mut state {
            State::Log(c) => c.init_star(&m)?,
            State::DivCon(c) => c.init_star(&m)?,
            State::Dag(d) => {
                for (a, b) in m.ones_iter() {
                    d.insert_edge(a, b).map_err(one_based)?;
                }
            }
            State::Naive { closure, work } => {
                *closure = closure_oracle(&m);
                *work += (self.n as u64).pow(3);
            }
        }
        self.retired_work = self.work_units();
        self.edges = m;
        self.state = state;
        Ok(())
    }

    /// Adds the edges of `edges`, all of which must be incident to `v`.
    /// Edges already present are ignored.
    pub fn insert(&mut self, v: usize, edges: &[(usize, usize)]) -> Result<()> {
        let c = self.vertex(v)?;
        let m = self.edge_matrix(edges)?;
        for (a, b) in m.ones_iter() {
            if a != c && b != c {
                return Err(Error::NotIncident {
                    center: v,
                    from: a + 1,
                    to: b + 1,
                });
            }
        }
        let fresh = m.minus(&self.edges);
        if fresh.is_zero() {
            return Ok(());
        }
        match &mut self.state {
            State::Log(cl) => cl.set_star(c, &fresh)?,
            State::DivCon(cl) => cl.set_star(c, &fresh)?,
            State::Dag(d) => {
                let new: Vec<_> = fresh.ones_iter().collect();
                for (k, &(a, b)) in new.iter().enumerate() {
                    if let Err(e) = d.insert_edge(a, b) {
                        for &(ra, rb) in new[..k].iter().rev() {
                            d.delete_edge(ra, rb)?;
                        }
                        return Err(one_based(e));
                    }
                }
            }
            State::Naive { closure, work } => {
                *closure = closure_oracle(&self.edges.add(&fresh)?);
                *work += (self.n as u64).pow(3);
            }
        }
        self.edges.or_assign(&fresh);
        Ok(())
    }

    /// Removes the edges of `edges`, all of which must be present.
    pub fn delete(&mut self, edges: &[(usize, usize)]) -> Result<()> {
        let m = self.edge_matrix(edges)?;
        if let Some((a, b)) = m.first_outside(&self.edges) {
            return Err(Error::MissingEdge {
                from: a + 1,
                to: b + 1,
            });
        }
        if m.is_zero() {
            return Ok(());
        }
        match &mut self.state {
            State::Log(cl) => cl.reset_star(&m)?,
            State::DivCon(cl) => cl.reset_star(&m)?,
            State::Dag(d) => {
                for (a, b) in m.ones_iter() {
                    d.delete_edge(a, b)?;
                }
            }
            State::Naive { closure, work } => {
                *closure = closure_oracle(&self.edges.minus(&m));
                *work += (self.n as u64).pow(3);
            }
        }
        self.edges.and_not_assign(&m);
        Ok(())
    }

    /// Whether `v` is reachable from `u` (every vertex reaches itself).
    pub fn query(&mut self, u: usize, v: usize) -> Result<bool> {
        let (a, b) = self.edge_index(u, v)?;
        match &mut self.state {
            State::Log(c) => c.lookup_star(a, b),
            State::DivCon(c) => c.lookup_star(a, b),
            State::Dag(d) => d.query(a, b),
            State::Naive { closure, .. } => Ok(closure.get(a, b)),
        }
    }

    /// The reachability matrix as currently reported by the backend (0-based).
    pub fn closure(&mut self) -> Result<BoolMatrix> {
        Ok(match &mut self.state {
            State::Log(c) => c.closure(),
            State::DivCon(c) => c.closure(),
            State::Dag(d) => {
                let mut m = BoolMatrix::new(self.n);
                for a in 0..self.n {
                    for b in 0..self.n {
                        if d.query(a, b)? {
                            m.set(a, b);
                        }
                    }
                }
                m
            }
            State::Naive { closure, .. } => closure.clone(),
        })
    }

    /// Cumulative instrumented work of the backend, including work done
    /// before the last re-initialisation.
    pub fn work_units(&self) -> u64 {
        self.retired_work
            + match &self.state {
                State::Log(c) => c.work_units(),
                State::DivCon(c) => c.work_units(),
                State::Dag(d) => d.work_units(),
                State::Naive { work, .. } => *work,
            }
    }

    /// Runs the backend's internal consistency checks.
    pub fn audit(&self) -> std::result::Result<(), String> {
        match &self.state {
            State::Log(c) => c.audit(),
            State::DivCon(c) => c.audit(),
            State::Dag(d) => {
                if d.edges() != self.edges.ones_iter().collect::<Vec<_>>() {
                    return Err("counting backend holds a different edge set".into());
                }
                d.audit()
            }
            State::Naive { closure, .. } => {
                if *closure != closure_oracle(&self.edges) {
                    return Err("stored closure differs from recomputation".into());
                }
                Ok(())
            }
        }
    }
}

/// Shifts the vertex identifiers of a counting-backend error to 1-based.
fn one_based(e: Error) -> Error {
    match e {
        Error::Cycle { from, to, path } => Error::Cycle {
            from: from + 1,
            to: to + 1,
            path: path.into_iter().map(|v| v + 1).collect(),
        },
        Error::DuplicateEdge { from, to } => Error::DuplicateEdge {
            from: from + 1,
            to: to + 1,
        },
        Error::MissingEdge { from, to } => Error::MissingEdge {
            from: from + 1,
            to: to + 1,
        },
        other => other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn backends_parse_and_print() {
        for b in Backend::ALL {
            assert_eq!(b.name().parse::<Backend>().unwrap(), b);
        }
        assert!("nope".parse::<Backend>().is_err());
    }

    #[test]
    fn every_backend_answers_a_small_sequence() {
        for b in Backend::ALL {
            let mut g = DynGraph::new(5, b).unwrap();
            g.init(&[(1, 2), (2, 3)]).unwrap();
            assert!(g.query(1, 3).unwrap());
            g.insert(4, &[(3, 4), (4, 5)]).unwrap();
            assert!(g.query(1, 5).unwrap());
            g.delete(&[(2, 3)]).unwrap();
            assert!(!g.query(1, 5).unwrap());
            assert!(g.query(3, 5).unwrap());
            assert!(g.query(5, 5).unwrap());
            g.audit().unwrap();
        }
    }

    #[test]
    fn preconditions_are_checked() {
        let mut g = DynGraph::new(4, Backend::DagCounting).unwrap();
        assert!(matches!(
            g.insert(1, &[(2, 3)]),
            Err(Error::NotIncident { .. })
        ));
        assert!(matches!(
            g.delete(&[(1, 2)]),
            Err(Error::MissingEdge { .. })
        ));
        assert!(matches!(g.query(0, 1), Err(Error::IndexOutOfRange { .. })));
        g.insert(2, &[(1, 2), (2, 3)]).unwrap();
        let err = g.insert(1, &[(1, 4), (3, 1)]).unwrap_err();
        assert!(matches!(err, Error::Cycle { from: 3, to: 1, .. }));
        assert_eq!(g.edges(), vec![(1, 2), (2, 3)]);
        assert!(!g.query(1, 4).unwrap());
    }
}
