//! Reachability on directed acyclic graphs by counting paths.
//!
//! `M[x, y]` holds the number of distinct paths from `x` to `y` modulo a
//! prime, with the empty path counted on the diagonal. Inserting the edge
//! `(x, y)` adds `M[u, x] · M[y, v]` to every `M[u, v]`, a rank-one update
//! of a [`LazyIntMatrix`]; deleting it subtracts the same product. A query
//! reports reachability when the count is non-zero, so positive answers are
//! always correct and a negative answer is wrong only if the true count is a
//! multiple of the prime.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::lazy_intmat::{is_prime, IntMatrix, LazyIntMatrix};

/// Default buffering exponent of the path-count matrix.
pub const DEFAULT_EPSILON: f64 = 0.5;

/// Draws a prime uniformly among the odd candidates of `[2^61, 2^62)`.
pub fn random_prime(seed: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let candidate = rng.gen_range((1u64 << 61)..(1u64 << 62)) | 1;
        if is_prime(candidate) {
            return candidate;
        }
    }
}

/// Dynamic DAG with path counts maintained modulo a prime.
#[derive(Clone, Debug)]
pub struct DagCounter {
    n: usize,
    out: Vec<Vec<usize>>,
    m: LazyIntMatrix,
    prime: u64,
}

impl DagCounter {
    /// Empty DAG on `n` vertices with a random 62-bit prime drawn from `seed`
    /// and the default buffering exponent.
    pub fn new(n: usize, seed: u64) -> Result<Self> {
        Self::with_params(n, DEFAULT_EPSILON, Some(random_prime(seed)))
    }

    /// Empty DAG on `n` vertices with explicit buffering exponent and prime.
    /// With `prime = None` counts wrap modulo `2^64`.
    pub fn with_params(n: usize, epsilon: f64, prime: Option<u64>) -> Result<Self> {
        let mut m = LazyIntMatrix::new(n, epsilon, prime)?;
        m.init(&IntMatrix::identity(n))?;
        Ok(Self {
            n,
            out: vec![Vec::new(); n],
            m,
            prime: prime.unwrap_or(0),
        })
    }

    /// Number of vertices.
    pub fn n(&self) -> usize {
        self.n
    }

    /// The modulus (0 when counts wrap).
    pub fn prime(&self) -> u64 {
        self.prime
    }

    /// The underlying path-count matrix.
    pub fn counts(&self) -> &LazyIntMatrix {
        &self.m
    }

    /// Whether `(x, y)` is an edge.
    pub fn has_edge(&self, x: usize, y: usize) -> bool {
        self.out.get(x).is_some_and(|o| o.contains(&y))
    }

    /// All edges in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut e: Vec<_> = self
            .out
            .iter()
            .enumerate()
            .flat_map(|(x, o)| o.iter().map(move |&y| (x, y)))
            .collect();
        e.sort_unstable();
        e
    }

    fn check(&self, i: usize) -> Result<()> {
        if i < self.n {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange {
                index: i,
                n: self.n,
            })
        }
    }

    /// A path `from ⇝ to` in the current graph, if one exists.
    fn find_path(&self, from: usize, to: usize) -> Option<Vec<usize>> {
        let mut parent = vec![usize::MAX; self.n];
        parent[from] = from;
        let mut stack = vec![from];
        while let Some(u) = stack.pop() {
            if u == to {
                let mut path = vec![to];
                let mut cur = to;
                while cur != from {
                    cur = parent[cur];
                    path.push(cur);
                }
                path.reverse();
                return Some(path);
            }
            for &v in &self.out[u] {
                if parent[v] == usize::MAX {
                    parent[v] = u;
                    stack.push(v);
                }
            }
        }
        None
    }

    fn gather(&mut self, x: usize, y: usize) -> Result<(Vec<i64>, Vec<i64>)> {
        let mut j = vec![0; self.n];
        let mut i = vec![0; self.n];
        for z in 0..self.n {
            j[z] = self.m.lookup(z, x)?;
            i[z] = self.m.lookup(y, z)?;
        }
        Ok((j, i))
    }

    /// Inserts the edge `(x, y)`; fails if it exists or would close a cycle.
    pub fn insert_edge(&mut self, x: usize, y: usize) -> Result<()> {
        self.check(x)?;
        self.check(y)?;
        if self.has_edge(x, y) {
            return Err(Error::DuplicateEdge { from: x, to: y });
        }
        if let Some(path) = self.find_path(y, x) {
            return Err(Error::Cycle {
                from: x,
                to: y,
                path,
            });
        }
        let (j, i) = self.gather(x, y)?;
        self.m.update(&j, &i)?;
        self.out[x].push(y);
        Ok(())
    }

    /// Deletes the edge `(x, y)`; fails if it is absent.
    pub fn delete_edge(&mut self, x: usize, y: usize) -> Result<()> {
        self.check(x)?;
        self.check(y)?;
        let pos = self.out[x]
            .iter()
            .position(|&v| v == y)
            .ok_or(Error::MissingEdge { from: x, to: y })?;
        self.out[x].swap_remove(pos);
        // Paths into x and out of y never use (x, y) in a DAG, so the
        // gathered vectors are the same before and after the removal.
        let (j, i) = self.gather(x, y)?;
        let neg: Vec<i64> = j.iter().map(|v| v.wrapping_neg()).collect();
        self.m.update(&neg, &i)
    }

    /// Path count `x ⇝ y` modulo the prime.
    pub fn count(&mut self, x: usize, y: usize) -> Result<i64> {
        self.m.lookup(x, y)
    }

    /// Whether `y` is reachable from `x` according to the counts.
    pub fn query(&mut self, x: usize, y: usize) -> Result<bool> {
        Ok(self.m.lookup(x, y)? != 0)
    }

    /// Cumulative arithmetic work of the count matrix.
    pub fn work_units(&self) -> u64 {
        self.m.work_units()
    }

    /// Recounts all paths from scratch in topological order and compares
    /// them with the maintained matrix; also checks the buffer bound.
    pub fn audit(&self) -> std::result::Result<(), String> {
        if self.m.buffered() > self.m.cap() {
            return Err(format!(
                "{} updates buffered, cap is {}",
                self.m.buffered(),
                self.m.cap()
            ));
        }
        let n = self.n;
        let mut indeg = vec![0usize; n];
        for o in &self.out {
            for &v in o {
                indeg[v] += 1;
            }
        }
        let mut order: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
        let mut head = 0;
        while head < order.len() {
            let u = order[head];
            head += 1;
            for &v in &self.out[u] {
                indeg[v] -= 1;
                if indeg[v] == 0 {
                    order.push(v);
                }
            }
        }
        if order.len() != n {
            return Err("edge set contains a cycle".into());
        }
        let reduce = |v: u128| -> i64 {
            match self.prime {
                0 => v as u64 as i64,
                p => (v % p as u128) as i64,
            }
        };
        for s in 0..n {
            let mut count = vec![0u128; n];
            count[s] = 1;
            for &u in &order {
                let c = count[u];
                if c == 0 {
                    continue;
                }
                for &v in &self.out[u] {
                    count[v] = reduce(count[v] + c) as u64 as u128;
                }
            }
            for (t, &c) in count.iter().enumerate() {
                let want = reduce(c);
                if self.m.peek(s, t) != want {
                    return Err(format!(
                        "count ({s},{t}) is {} but recounting gives {want}",
                        self.m.peek(s, t)
                    ));
                }
            }
        }
        Ok(())
    }
}
