//! Trace replay with optional oracle cross-checking and auditing.

use std::time::Instant;

use dyntc::{Backend, DynGraph, GraphOptions};

use crate::error::{HarnessError, Mismatch, Result};
use crate::trace::{OpKind, Trace, TraceOp};

/// Replay settings.
#[derive(Clone, Copy, Debug)]
pub struct ReplayConfig {
    /// Backend under test.
    pub backend: Backend,
    /// Compare every query, and the sweeps below, with the oracle backend.
    pub check: bool,
    /// With `check`, compare all pairs after every `sweep_stride`-th
    /// operation (0 disables sweeps).
    pub sweep_stride: usize,
    /// Run the backend's internal audit after every `audit_stride`-th
    /// operation (0 disables audits).
    pub audit_stride: usize,
    /// Backend construction parameters.
    pub options: GraphOptions,
}

impl ReplayConfig {
    /// Plain replay of `backend` without checks.
    pub fn new(backend: Backend) -> Self {
        Self {
            backend,
            check: false,
            sweep_stride: 0,
            audit_stride: 0,
            options: GraphOptions::default(),
        }
    }
}

/// Measurement of one replayed operation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BenchRecord {
    /// Backend name.
    pub backend: String,
    /// Number of vertices.
    pub n: usize,
    /// 0-based position of the operation in the trace.
    pub op_index: usize,
    /// Operation kind.
    pub kind: OpKind,
    /// Instrumented work spent by this operation.
    pub work_units: u64,
    /// Wall-clock nanoseconds spent by this operation.
    pub ns: u64,
    /// Query answer, for queries.
    pub result: Option<bool>,
}

impl BenchRecord {
    /// CSV header matching [`BenchRecord::to_csv`].
    pub const CSV_HEADER: &'static str = "backend,n,op_index,kind,work_units,ns,result";

    /// One CSV line (without newline); `result` is `1`, `0` or empty.
    pub fn to_csv(&self) -> String {
        let result = match self.result {
            Some(true) => "1",
            Some(false) => "0",
            None => "",
        };
        format!(
            "{},{},{},{},{},{},{}",
            self.backend, self.n, self.op_index, self.kind, self.work_units, self.ns, result
        )
    }
}

/// Totals of a completed replay.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ReplaySummary {
    /// Operations executed.
    pub ops: usize,
    /// Queries answered.
    pub queries: usize,
    /// Query answers compared with the oracle.
    pub checked_queries: usize,
    /// All-pairs sweeps compared with the oracle.
    pub sweeps: usize,
    /// Internal audits run.
    pub audits: usize,
    /// Total instrumented work.
    pub work_units: u64,
    /// Total wall-clock nanoseconds of the operations.
    pub ns: u64,
}

fn apply(g: &mut DynGraph, op: &TraceOp) -> dyntc::Result<Option<bool>> {
    match op {
        TraceOp::Init(e) => g.init(e).map(|_| None),
        TraceOp::Insert { v, edges } => g.insert(*v, edges).map(|_| None),
        TraceOp::Delete(e) => g.delete(e).map(|_| None),
        TraceOp::Query(u, v) => g.query(*u, *v).map(Some),
    }
}

/// Executes `trace` on the configured backend, passing one record per
/// operation to `sink`. Stops at the first error, mismatch or failed audit.
pub fn replay(
    trace: &Trace,
    cfg: &ReplayConfig,
    mut sink: impl FnMut(&BenchRecord),
) -> Result<ReplaySummary> {
    let mut g = DynGraph::with_options(trace.n, cfg.backend, cfg.options)?;
    let mut oracle = if cfg.check {
        Some(DynGraph::new(trace.n, Backend::OracleNaive)?)
    } else {
        None
    };
    let name = cfg.backend.name().to_string();
    let mut summary = ReplaySummary::default();
    for (idx, op) in trace.ops.iter().enumerate() {
        let before = g.work_units();
        let start = Instant::now();
        let result = apply(&mut g, op).map_err(|source| HarnessError::Op {
            op_index: idx,
            source,
        })?;
        let ns = start.elapsed().as_nanos() as u64;
        let record = BenchRecord {
            backend: name.clone(),
            n: trace.n,
            op_index: idx,
            kind: op.kind(),
            work_units: g.work_units().saturating_sub(before),
            ns,
            result,
        };
        summary.ops += 1;
        summary.work_units += record.work_units;
        summary.ns += ns;
        sink(&record);
        if let Some(oracle) = oracle.as_mut() {
            let expected = apply(oracle, op).map_err(|source| HarnessError::Op {
                op_index: idx,
                source,
            })?;
            if let (TraceOp::Query(u, v), Some(got), Some(expected)) = (op, result, expected) {
                summary.checked_queries += 1;
                if got != expected {
                    return Err(HarnessError::Mismatch(Mismatch {
                        backend: name,
                        op_index: idx,
                        u: *u,
                        v: *v,
                        expected,
                        got,
                    }));
                }
            }
            if cfg.sweep_stride > 0 && (idx + 1) % cfg.sweep_stride == 0 {
                summary.sweeps += 1;
                let want = oracle.closure()?;
                let have = g.closure()?;
                if let Some((a, b)) = want
                    .first_outside(&have)
                    .or_else(|| have.first_outside(&want))
                {
                    return Err(HarnessError::Mismatch(Mismatch {
                        backend: name,
                        op_index: idx,
                        u: a + 1,
                        v: b + 1,
                        expected: want.get(a, b),
                        got: have.get(a, b),
                    }));
                }
            }
        }
        if matches!(op, TraceOp::Query(..)) {
            summary.queries += 1;
        }
        if cfg.audit_stride > 0 && (idx + 1) % cfg.audit_stride == 0 {
            summary.audits += 1;
            g.audit().map_err(|msg| HarnessError::Audit {
                backend: name.clone(),
                op_index: idx,
                msg,
            })?;
        }
    }
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::{generate, Profile};

    #[test]
    fn oracle_replay_checks_clean() {
        let t = generate(10, 80, Profile::Mixed, 2).unwrap();
        let cfg = ReplayConfig {
            check: true,
            sweep_stride: 1,
            ..ReplayConfig::new(Backend::OracleNaive)
        };
        let s = replay(&t, &cfg, |_| {}).unwrap();
        assert_eq!(s.ops, 81);
        assert_eq!(s.sweeps, 81);
    }

    #[test]
    fn records_have_increasing_indices() {
        let t = generate(6, 20, Profile::Incremental, 3).unwrap();
        let mut seen = Vec::new();
        replay(&t, &ReplayConfig::new(Backend::Log), |r| {
            seen.push(r.op_index)
        })
        .unwrap();
        assert_eq!(seen, (0..21).collect::<Vec<_>>());
    }

    #[test]
    fn csv_line_format() {
        let r = BenchRecord {
            backend: "log".into(),
            n: 4,
            op_index: 2,
            kind: OpKind::Query,
            work_units: 0,
            ns: 10,
            result: Some(true),
        };
        assert_eq!(r.to_csv(), "log,4,2,QUERY,0,10,1");
    }

    #[test]
    fn cycle_on_counting_backend_is_an_operation_error() {
        let t: Trace = "N 2\nINIT 1 1 2\nINSERT 2 1 2 1\n".parse().unwrap();
        let err = replay(&t, &ReplayConfig::new(Backend::DagCounting), |_| {}).unwrap_err();
        assert!(matches!(err, HarnessError::Op { op_index: 1, .. }));
    }
}
