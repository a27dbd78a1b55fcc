//! Seeded workload generation.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{HarnessError, Result};
use crate::trace::{Edge, Trace, TraceOp};

/// Shape of a generated workload.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Profile {
    /// Sparse random start, then insertions, deletions and queries.
    Mixed,
    /// Empty start, then insertions and queries.
    Incremental,
    /// Denser random start, then deletions and queries.
    Decremental,
    /// Like `Mixed`, with every edge following a hidden vertex order.
    DagMixed,
}

impl Profile {
    /// All profiles.
    pub const ALL: [Profile; 4] = [
        Profile::Mixed,
        Profile::Incremental,
        Profile::Decremental,
        Profile::DagMixed,
    ];

    /// Canonical name.
    pub fn name(self) -> &'static str {
        match self {
            Profile::Mixed => "mixed",
            Profile::Incremental => "incremental",
            Profile::Decremental => "decremental",
            Profile::DagMixed => "dag-mixed",
        }
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Profile {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self> {
        Profile::ALL
            .into_iter()
            .find(|p| p.name() == s || p.name().replace('-', "_") == s)
            .ok_or_else(|| HarnessError::InvalidProfile(s.to_string()))
    }
}

struct Generator {
    rng: ChaCha8Rng,
    n: usize,
    rank: Option<Vec<usize>>,
    edges: BTreeSet<Edge>,
}

impl Generator {
    fn vertex(&mut self) -> usize {
        self.rng.gen_range(1..=self.n)
    }

    /// Orients `(a, b)` along the hidden order, if there is one.
    fn orient(&self, a: usize, b: usize) -> Option<Edge> {
        match &self.rank {
            _ if a == b => None,
            Some(rank) if rank[a] > rank[b] => Some((b, a)),
            _ => Some((a, b)),
        }
    }

    fn random_edges(&mut self, count: usize) -> Vec<Edge> {
        let mut set = BTreeSet::new();
        for _ in 0..count {
            let (a, b) = (self.vertex(), self.vertex());
            if let Some(e) = self.orient(a, b) {
                set.insert(e);
            }
        }
        set.into_iter().collect()
    }

    fn init(&mut self, count: usize) -> TraceOp {
        let edges = self.random_edges(count);
        self.edges = edges.iter().copied().collect();
        TraceOp::Init(edges)
    }

    fn insert(&mut self) -> TraceOp {
        let v = self.vertex();
        let mut set = BTreeSet::new();
        for _ in 0..self.rng.gen_range(1..=3) {
            let u = self.vertex();
            let (a, b) = if self.rng.gen_bool(0.5) {
                (v, u)
            } else {
                (u, v)
            };
            if let Some(e) = self.orient(a, b) {
                set.insert(e);
            }
        }
        let edges: Vec<Edge> = set.into_iter().collect();
        self.edges.extend(edges.iter().copied());
        TraceOp::Insert { v, edges }
    }

    fn delete(&mut self) -> Option<TraceOp> {
        if self.edges.is_empty() {
            return None;
        }
        let present: Vec<Edge> = self.edges.iter().copied().collect();
        let k = self.rng.gen_range(1..=3).min(present.len());
        let mut chosen: Vec<Edge> = present.choose_multiple(&mut self.rng, k).copied().collect();
        chosen.sort_unstable();
        for e in &chosen {
            self.edges.remove(e);
        }
        Some(TraceOp::Delete(chosen))
    }

    fn query(&mut self) -> TraceOp {
        TraceOp::Query(self.vertex(), self.vertex())
    }
}

/// Generates a trace of `length` operations after an initial `INIT` line.
/// The output depends only on the arguments.
pub fn generate(n: usize, length: usize, profile: Profile, seed: u64) -> Result<Trace> {
    if n == 0 {
        return Err(
            dyntc::Error::InvalidParameter("a trace needs at least one vertex".into()).into(),
        );
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rank = (profile == Profile::DagMixed).then(|| {
        let mut order: Vec<usize> = (0..=n).collect();
        order[1..].shuffle(&mut rng);
        order
    });
    let mut g = Generator {
        rng,
        n,
        rank,
        edges: BTreeSet::new(),
    };
    let mut ops = Vec::with_capacity(length + 1);
    ops.push(match profile {
        Profile::Incremental => g.init(0),
        Profile::Decremental => g.init(3 * n),
        Profile::Mixed | Profile::DagMixed => g.init(n),
    });
    for _ in 0..length {
        let roll = g.rng.gen_range(0..100);
        let op = match profile {
            Profile::Mixed | Profile::DagMixed => match roll {
                0..=39 => g.insert(),
                40..=64 => g.delete().unwrap_or_else(|| g.insert()),
                _ => g.query(),
            },
            Profile::Incremental => match roll {
                0..=59 => g.insert(),
                _ => g.query(),
            },
            Profile::Decremental => match roll {
                0..=59 => g.delete().unwrap_or_else(|| g.query()),
                _ => g.query(),
            },
        };
        ops.push(op);
    }
    Ok(Trace { n, ops })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_length_is_just_init() {
        let t = generate(8, 0, Profile::Mixed, 1).unwrap();
        assert_eq!(t.ops.len(), 1);
        assert!(matches!(t.ops[0], TraceOp::Init(_)));
    }

    #[test]
    fn deterministic() {
        for p in Profile::ALL {
            let a = generate(12, 50, p, 9).unwrap().to_string();
            let b = generate(12, 50, p, 9).unwrap().to_string();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn profiles_parse() {
        for p in Profile::ALL {
            assert_eq!(p.name().parse::<Profile>().unwrap(), p);
        }
        assert!("nope".parse::<Profile>().is_err());
    }

    #[test]
    fn decremental_only_deletes() {
        let t = generate(10, 60, Profile::Decremental, 4).unwrap();
        assert!(t.ops[1..]
            .iter()
            .all(|op| matches!(op, TraceOp::Delete(_) | TraceOp::Query(..))));
    }
}
