//! Benchmark sweeps over vertex counts with log-log trend estimates.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use dyntc::{Backend, GraphOptions};

use crate::error::Result;
use crate::gen::{generate, Profile};
use crate::replay::{replay, BenchRecord, ReplayConfig};
use crate::trace::OpKind;

/// Benchmark settings.
#[derive(Clone, Debug)]
pub struct BenchConfig {
    /// Vertex counts to measure.
    pub ns: Vec<usize>,
    /// Workload profile.
    pub profile: Profile,
    /// Backends to measure.
    pub backends: Vec<Backend>,
    /// Traces per `(backend, n)`; repetition `r` uses seed `seed + r`.
    pub reps: usize,
    /// Operations per trace after the initial `INIT`.
    pub length: usize,
    /// Base seed.
    pub seed: u64,
    /// Backend construction parameters (the prime seed follows the trace seed).
    pub options: GraphOptions,
}

/// Operation classes aggregated by a benchmark.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OpClass {
    /// Insertions.
    Insert,
    /// Deletions.
    Delete,
    /// Insertions and deletions together.
    Update,
    /// Queries.
    Query,
}

impl OpClass {
    /// Lower-case name.
    pub fn name(self) -> &'static str {
        match self {
            OpClass::Insert => "insert",
            OpClass::Delete => "delete",
            OpClass::Update => "update",
            OpClass::Query => "query",
        }
    }

    fn of(kind: OpKind) -> &'static [OpClass] {
        match kind {
            OpKind::Init => &[],
            OpKind::Insert => &[OpClass::Insert, OpClass::Update],
            OpKind::Delete => &[OpClass::Delete, OpClass::Update],
            OpKind::Query => &[OpClass::Query],
        }
    }
}

/// Mean cost of one operation class at one vertex count.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BenchPoint {
    /// Backend.
    pub backend: Backend,
    /// Vertex count.
    pub n: usize,
    /// Operation class.
    pub class: OpClass,
    /// Number of operations averaged.
    pub count: u64,
    /// Mean instrumented work.
    pub mean_work: f64,
    /// Mean wall-clock nanoseconds.
    pub mean_ns: f64,
}

/// Aggregated benchmark results.
#[derive(Clone, Debug, Default)]
pub struct BenchReport {
    /// One point per `(backend, n, class)` with at least one operation.
    pub points: Vec<BenchPoint>,
}

impl BenchReport {
    /// Log-log least-squares slope of mean work against `n` for one backend
    /// and class, over points with positive mean work.
    pub fn work_slope(&self, backend: Backend, class: OpClass) -> Option<f64> {
        let pts: Vec<(f64, f64)> = self
            .points
            .iter()
            .filter(|p| p.backend == backend && p.class == class && p.mean_work > 0.0)
            .map(|p| (p.n as f64, p.mean_work))
            .collect();
        loglog_slope(&pts)
    }

    /// Text table of all points followed by slope estimates.
    pub fn summary(&self) -> String {
        let mut out = String::from("backend,n,class,count,mean_work,mean_ns\n");
        for p in &self.points {
            let _ = writeln!(
                out,
                "{},{},{},{},{:.1},{:.1}",
                p.backend,
                p.n,
                p.class.name(),
                p.count,
                p.mean_work,
                p.mean_ns
            );
        }
        let keys: BTreeSet<(&str, OpClass, Backend)> = self
            .points
            .iter()
            .map(|p| (p.backend.name(), p.class, p.backend))
            .collect();
        for (_, c, b) in keys {
            if let Some(s) = self.work_slope(b, c) {
                let _ = writeln!(out, "slope,{b},{},{s:.3}", c.name());
            }
        }
        out
    }
}

/// Least-squares slope of `ln y` against `ln x`; `None` with fewer than two
/// distinct abscissae.
pub fn loglog_slope(points: &[(f64, f64)]) -> Option<f64> {
    let logs: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let k = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / k;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (logs.len() >= 2 && sxx > 0.0).then(|| sxy / sxx)
}

/// Runs every `(backend, n, rep)` combination, passing each per-operation
/// record to `sink`, and returns the aggregates.
pub fn run(cfg: &BenchConfig, mut sink: impl FnMut(&BenchRecord)) -> Result<BenchReport> {
    // (backend, operation count, total work, total nanoseconds)
    type Totals = (Backend, u64, u128, u128);
    let mut acc: BTreeMap<(&'static str, usize, OpClass), Totals> = BTreeMap::new();
    for &backend in &cfg.backends {
        for &n in &cfg.ns {
            for rep in 0..cfg.reps {
                let seed = cfg.seed.wrapping_add(rep as u64);
                let trace = generate(n, cfg.length, cfg.profile, seed)?;
                let rc = ReplayConfig {
                    options: GraphOptions {
                        seed,
                        ..cfg.options
                    },
                    ..ReplayConfig::new(backend)
                };
                replay(&trace, &rc, |r| {
                    for &class in OpClass::of(r.kind) {
                        let e = acc
                            .entry((backend.name(), n, class))
                            .or_insert((backend, 0, 0, 0));
                        e.1 += 1;
                        e.2 += r.work_units as u128;
                        e.3 += r.ns as u128;
                    }
                    sink(r);
                })?;
            }
        }
    }
    let points = acc
        .into_iter()
        .map(|((_, n, class), (backend, count, work, ns))| BenchPoint {
            backend,
            n,
            class,
            count,
            mean_work: work as f64 / count as f64,
            mean_ns: ns as f64 / count as f64,
        })
        .collect();
    Ok(BenchReport { points })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_of_power_law() {
        let pts: Vec<_> = [8.0, 16.0, 32.0]
            .iter()
            .map(|&x: &f64| (x, 3.0 * x * x))
            .collect();
        assert!((loglog_slope(&pts).unwrap() - 2.0).abs() < 1e-9);
        assert_eq!(loglog_slope(&pts[..1]), None);
    }

    #[test]
    fn empty_backend_list_gives_no_points() {
        let cfg = BenchConfig {
            ns: vec![8],
            profile: Profile::Mixed,
            backends: vec![],
            reps: 1,
            length: 10,
            seed: 0,
            options: GraphOptions::default(),
        };
        let mut count = 0;
        let report = run(&cfg, |_| count += 1).unwrap();
        assert!(report.points.is_empty());
        assert_eq!(count, 0);
    }
}
