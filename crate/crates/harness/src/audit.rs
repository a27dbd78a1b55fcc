//! Invariant audits: trace replays with inline consistency checks, and
//! randomized self-checks of the polynomial and lazy-matrix layers against
//! plain reference models.

use dyntc::lazy_intmat::IntMatrix;
use dyntc::{Backend, BoolMatrix, GraphOptions, LazyIntMatrix, PolyDeg2, PolyK, PolyShadow, Var};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::replay::{replay, ReplayConfig, ReplaySummary};
use crate::trace::Trace;

/// Replays `trace` with oracle sweeps and backend audits every `stride`
/// operations (queries are always checked).
pub fn audit_trace(
    trace: &Trace,
    backend: Backend,
    stride: usize,
    options: GraphOptions,
) -> Result<ReplaySummary> {
    let cfg = ReplayConfig {
        backend,
        check: true,
        sweep_stride: stride,
        audit_stride: stride,
        options,
    };
    replay(trace, &cfg, |_| {})
}

/// Outcome of a randomized self-check.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CheckReport {
    /// Individual comparisons made.
    pub checks: u64,
    /// Comparisons that failed.
    pub violations: u64,
    /// Description of the first failure.
    pub first: Option<String>,
}

impl CheckReport {
    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.violations += 1;
            if self.first.is_none() {
                self.first = Some(what());
            }
        }
    }

    /// Adds the counts of `other`.
    pub fn merge(&mut self, other: CheckReport) {
        self.checks += other.checks;
        self.violations += other.violations;
        if self.first.is_none() {
            self.first = other.first;
        }
    }

    /// Whether no comparison failed.
    pub fn ok(&self) -> bool {
        self.violations == 0
    }
}

fn random_matrix(rng: &mut ChaCha8Rng, n: usize, density: f64) -> BoolMatrix {
    let mut m = BoolMatrix::new(n);
    for x in 0..n {
        for y in 0..n {
            if rng.gen_bool(density) {
                m.set(x, y);
            }
        }
    }
    m
}

#[derive(Clone, Debug)]
enum PolyOp {
    Init(Vec<BoolMatrix>),
    SetRow(usize, BoolMatrix, Var),
    SetCol(usize, BoolMatrix, Var),
    Lazy(BoolMatrix, Var),
    Reset(BoolMatrix, Var),
}

fn random_poly_op(rng: &mut ChaCha8Rng, shadow: &PolyShadow, vars: &[Var], n: usize) -> PolyOp {
    let var = vars[rng.gen_range(0..vars.len())];
    let i = rng.gen_range(0..n);
    let mut line = BoolMatrix::new(n);
    for _ in 0..rng.gen_range(0..=3) {
        let u = rng.gen_range(0..n);
        line.set(i, u);
        line.set(u, i);
    }
    match rng.gen_range(0..100) {
        0..=4 => PolyOp::Init(vars.iter().map(|_| random_matrix(rng, n, 0.15)).collect()),
        5..=34 => PolyOp::SetRow(i, line, var),
        35..=64 => PolyOp::SetCol(i, line, var),
        65..=84 => PolyOp::Lazy(random_matrix(rng, n, 0.05), var),
        _ => {
            let value = shadow.value(var).expect("variable exists");
            let mut d = BoolMatrix::new(n);
            for (a, b) in value.ones_iter() {
                if rng.gen_bool(0.3) {
                    d.set(a, b);
                }
            }
            PolyOp::Reset(d, var)
        }
    }
}

fn apply_shadow(s: &mut PolyShadow, op: &PolyOp) -> dyntc::Result<()> {
    match op {
        PolyOp::Init(v) => s.init(v),
        PolyOp::SetRow(i, d, var) => s.set_row(*i, d, *var),
        PolyOp::SetCol(i, d, var) => s.set_col(*i, d, *var),
        PolyOp::Lazy(d, var) => s.lazy_set(d, *var),
        PolyOp::Reset(d, var) => s.reset(d, *var),
    }
}

fn apply_polyk(p: &mut PolyK, op: &PolyOp) -> dyntc::Result<()> {
    match op {
        PolyOp::Init(v) => p.init(v),
        PolyOp::SetRow(i, d, var) => p.set_row(*i, d, *var).map(drop),
        PolyOp::SetCol(i, d, var) => p.set_col(*i, d, *var).map(drop),
        PolyOp::Lazy(d, var) => p.lazy_set(d, *var),
        PolyOp::Reset(d, var) => p.reset(d, *var).map(drop),
    }
}

fn apply_deg2(p: &mut PolyDeg2, op: &PolyOp) -> dyntc::Result<()> {
    match op {
        PolyOp::Init(v) => p.init(v),
        PolyOp::SetRow(i, d, var) => p.set_row(*i, d, *var).map(drop),
        PolyOp::SetCol(i, d, var) => p.set_col(*i, d, *var).map(drop),
        PolyOp::Lazy(d, var) => p.lazy_set(d, *var),
        PolyOp::Reset(d, var) => p.reset(d, *var).map(drop),
    }
}

/// Random operation sequence on a polynomial with `h` terms of degree `k`,
/// checking after every step that the looked-up value lies between the
/// confirmed-entry bound and the exact value of the reference model.
pub fn poly_sandwich(
    seed: u64,
    n: usize,
    h: usize,
    k: usize,
    len: usize,
) -> dyntc::Result<CheckReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let degrees = vec![k; h];
    let mut p = PolyK::new(n, &degrees)?;
    let mut s = PolyShadow::new(n, &degrees);
    let vars = p.vars();
    let mut report = CheckReport::default();
    for step in 0..len {
        let op = random_poly_op(&mut rng, &s, &vars, n);
        apply_polyk(&mut p, &op)?;
        apply_shadow(&mut s, &op)?;
        let y = p.lookup();
        report.record(s.lower().is_subset_of(y), || {
            format!("seed {seed} step {step}: a confirmed product is missing")
        });
        report.record(y.is_subset_of(&s.upper()), || {
            format!("seed {seed} step {step}: a reported 1 is not in the polynomial")
        });
    }
    Ok(report)
}

/// Random operation sequence on a degree-2 polynomial with `h` terms,
/// checking after every step that every witness counter equals its
/// brute-force definition, that `Φ_a ≤ n^3`, and that cumulative reset
/// decrements never exceed cumulative increments.
pub fn witness_counts(seed: u64, n: usize, h: usize, len: usize) -> dyntc::Result<CheckReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut p = PolyDeg2::new(n, h);
    let mut s = PolyShadow::new(n, &vec![2; h]);
    let vars: Vec<Var> = (0..h)
        .flat_map(|a| [Var::new(a, 0), Var::new(a, 1)])
        .collect();
    let mut report = CheckReport::default();
    let cube = (n as u64).pow(3);
    for step in 0..len {
        let op = random_poly_op(&mut rng, &s, &vars, n);
        apply_deg2(&mut p, &op)?;
        apply_shadow(&mut s, &op)?;
        let audit = p.audit();
        report.record(audit.is_ok(), || {
            format!("seed {seed} step {step}: {audit:?}")
        });
        for a in 0..h {
            report.record(p.phi(a) <= cube, || {
                format!("seed {seed} step {step}: potential {} above n^3", p.phi(a))
            });
            report.record(p.phi_decrements(a) <= p.phi_increments(a), || {
                format!("seed {seed} step {step}: decrements exceed increments")
            });
        }
    }
    Ok(report)
}

/// Random rank-one updates and lookups on a [`LazyIntMatrix`], compared with
/// an eagerly updated dense mirror; also checks the buffer bound.
pub fn lazy_mirror(
    seed: u64,
    n: usize,
    epsilon: f64,
    modulus: Option<u64>,
    ops: usize,
) -> dyntc::Result<CheckReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut lazy = LazyIntMatrix::new(n, epsilon, modulus)?;
    let mut mirror = vec![0i64; n * n];
    let reduce = |v: i128| -> i64 {
        match modulus {
            Some(p) => v.rem_euclid(p as i128) as i64,
            None => v as i64,
        }
    };
    if rng.gen_bool(0.5) {
        let mut init = IntMatrix::zeros(n);
        for x in 0..n {
            for y in 0..n {
                let v = rng.gen_range(-5..6);
                init.set(x, y, v);
                mirror[x * n + y] = reduce(v as i128);
            }
        }
        lazy.init(&init)?;
    }
    let mut report = CheckReport::default();
    for step in 0..ops {
        if rng.gen_bool(0.5) {
            let j: Vec<i64> = (0..n).map(|_| rng.gen_range(-1000..1000)).collect();
            let i: Vec<i64> = (0..n).map(|_| rng.gen_range(-1000..1000)).collect();
            lazy.update(&j, &i)?;
            for x in 0..n {
                for y in 0..n {
                    let cell = &mut mirror[x * n + y];
                    *cell = match modulus {
                        Some(_) => reduce(*cell as i128 + j[x] as i128 * i[y] as i128),
                        None => cell.wrapping_add(j[x].wrapping_mul(i[y])),
                    };
                }
            }
        } else {
            let (x, y) = (rng.gen_range(0..n), rng.gen_range(0..n));
            let got = lazy.lookup(x, y)?;
            let want = mirror[x * n + y];
            report.record(got == want, || {
                format!("seed {seed} step {step}: ({x},{y}) is {got}, mirror holds {want}")
            });
        }
        report.record(lazy.buffered() <= lazy.cap(), || {
            format!(
                "seed {seed} step {step}: {} buffered, cap {}",
                lazy.buffered(),
                lazy.cap()
            )
        });
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::{generate, Profile};

    #[test]
    fn small_self_checks_pass() {
        for seed in 0..5 {
            assert!(poly_sandwich(seed, 6, 2, 3, 20).unwrap().ok());
            assert!(witness_counts(seed, 6, 2, 20).unwrap().ok());
            assert!(lazy_mirror(seed, 8, 0.5, Some(1_000_000_007), 100)
                .unwrap()
                .ok());
            assert!(lazy_mirror(seed, 8, 1.0, None, 100).unwrap().ok());
        }
    }

    #[test]
    fn trace_audit_runs_backend_checks() {
        let t = generate(8, 30, Profile::DagMixed, 5).unwrap();
        for b in Backend::ALL {
            let s = audit_trace(&t, b, 3, GraphOptions::default()).unwrap();
            assert_eq!(s.audits, 31 / 3);
        }
    }
}
