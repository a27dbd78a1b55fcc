//! Acceptance suite. Every criterion prints one `PASS` or `FAIL` line to the
//! real standard output (bypassing test capture) and gating criteria fail
//! the test when they fail. Criterion 9 is a soft trend check: its line is
//! printed but it never fails the test.

#![allow(clippy::needless_range_loop)]

use std::io::Write;
use std::time::{Duration, Instant};

use dyntc::closure_divcon::{delta_props_check, squaring_identity_holds};
use dyntc::dag_counter::random_prime;
use dyntc::{
    closure_munro, closure_munro_h, closure_oracle, Backend, BoolMatrix, DagCounter, DynGraph,
    GraphOptions,
};
use dyntc_harness::audit::{lazy_mirror, poly_sandwich, witness_counts, CheckReport};
use dyntc_harness::bench::{self, BenchConfig, OpClass};
use dyntc_harness::{generate, replay, Profile, ReplayConfig, TraceOp};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn report(id: u32, name: &str, pass: bool, detail: &str, elapsed: Duration) {
    let verdict = if pass { "PASS" } else { "FAIL" };
    let line = format!(
        "\n{verdict} [{id:>2}] {name}: {detail} ({:.1}s)\n",
        elapsed.as_secs_f64()
    );
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(line.as_bytes());
    let _ = out.flush();
}

fn gate(id: u32, name: &str, pass: bool, detail: String, start: Instant) {
    report(id, name, pass, &detail, start.elapsed());
    assert!(pass, "criterion {id} failed: {detail}");
}

fn random_matrix<R: Rng>(rng: &mut R, n: usize, density: f64) -> BoolMatrix {
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

fn random_centered<R: Rng>(rng: &mut R, n: usize, i: usize) -> BoolMatrix {
    let mut d = BoolMatrix::new(n);
    for _ in 0..rng.gen_range(0..=n) {
        let u = rng.gen_range(0..n);
        if rng.gen_bool(0.5) {
            d.set(i, u);
        } else {
            d.set(u, i);
        }
    }
    d
}

#[test]
fn c01_closure_oracle_agreement() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (mut total, mut bad) = (0, 0);
    for n in [4, 8, 16, 32] {
        for _ in 0..500 {
            let density = rng.gen_range(0.0..(3.0 / n as f64).min(1.0));
            let x = random_matrix(&mut rng, n, density);
            let want = closure_oracle(&x);
            total += 1;
            if closure_munro(&x) != want || closure_munro_h(&x) != want {
                bad += 1;
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    gate(
        1,
        "closure oracle agreement",
        bad == 0 && secs < 30.0,
        format!("{total} matrices, {bad} mismatches, limit 30s"),
        start,
    );
}

fn exactness(id: u32, backend: Backend) {
    let start = Instant::now();
    let (mut traces, mut failures) = (0, Vec::new());
    for n in [8, 16, 32] {
        for k in 0..200u64 {
            let seed = 1000 * n as u64 + k;
            let trace = generate(n, 100, Profile::Mixed, seed).unwrap();
            let cfg = ReplayConfig {
                check: true,
                sweep_stride: 1,
                ..ReplayConfig::new(backend)
            };
            traces += 1;
            if let Err(e) = replay(&trace, &cfg, |_| {}) {
                failures.push(format!("seed {seed}: {e}"));
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let mut detail = format!(
        "{traces} traces with all-pairs sweeps after every op, {} mismatching, limit 300s",
        failures.len()
    );
    if let Some(f) = failures.first() {
        detail.push_str(&format!("; first: {f}"));
    }
    let name = format!("end-to-end exactness, {backend}");
    gate(
        id,
        &name,
        failures.is_empty() && secs < 300.0,
        detail,
        start,
    );
}

#[test]
fn c02_divcon_exactness() {
    exactness(2, Backend::DivCon);
}

#[test]
fn c03_log_exactness() {
    exactness(3, Backend::Log);
}

/// Parameters of the random polynomial sequences shared by criteria 4 and 5.
fn poly_cases() -> Vec<(u64, usize, usize, usize)> {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    (0..500u64)
        .map(|seed| {
            let n = rng.gen_range(1..=16);
            let h = rng.gen_range(1..=3);
            let k = rng.gen_range(2..=4);
            (seed, n, h, k)
        })
        .collect()
}

#[test]
fn c04_polynomial_sandwich() {
    let start = Instant::now();
    let mut total = CheckReport::default();
    for (seed, n, h, k) in poly_cases() {
        total.merge(poly_sandwich(seed, n, h, k, 50).unwrap());
    }
    let mut detail = format!(
        "500 sequences of 50 ops, {} bound checks, {} violations",
        total.checks, total.violations
    );
    if let Some(f) = &total.first {
        detail.push_str(&format!("; first: {f}"));
    }
    gate(4, "polynomial sandwich", total.ok(), detail, start);
}

#[test]
fn c05_witness_count_invariant() {
    let start = Instant::now();
    let mut total = CheckReport::default();
    let mut sequences = 0;
    for (seed, n, h, k) in poly_cases() {
        if k == 2 {
            sequences += 1;
            total.merge(witness_counts(seed, n, h, 50).unwrap());
        }
    }
    let mut detail = format!(
        "{sequences} degree-2 sequences, {} checks (counters, potential bound, charging), {} violations",
        total.checks, total.violations
    );
    if let Some(f) = &total.first {
        detail.push_str(&format!("; first: {f}"));
    }
    gate(
        5,
        "witness-count invariant",
        sequences > 0 && total.ok(),
        detail,
        start,
    );
}

#[test]
fn c06_lazy_matrix_mirror() {
    let start = Instant::now();
    let mut total = CheckReport::default();
    let mut runs = 0;
    for n in [8, 32, 64] {
        for eps in [0.0, 0.5, 1.0] {
            for modulus in [None, Some(random_prime(n as u64))] {
                for seed in 0..3 {
                    runs += 1;
                    total.merge(lazy_mirror(seed, n, eps, modulus, 1000).unwrap());
                }
            }
        }
    }
    let detail = format!(
        "{runs} sequences of 1000 ops, {} checks, {} violations",
        total.checks, total.violations
    );
    gate(6, "lazy-matrix mirror", total.ok(), detail, start);
}

/// Path counts by enumeration over a topological order, or `None` if cyclic.
fn path_counts(n: usize, edges: &[(usize, usize)]) -> Option<Vec<Vec<u128>>> {
    let mut indeg = vec![0; n];
    for &(_, b) in edges {
        indeg[b] += 1;
    }
    let mut order: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
    let mut head = 0;
    while head < order.len() {
        let u = order[head];
        head += 1;
        for &(a, b) in edges {
            if a == u {
                indeg[b] -= 1;
                if indeg[b] == 0 {
                    order.push(b);
                }
            }
        }
    }
    if order.len() < n {
        return None;
    }
    let mut counts = vec![vec![0u128; n]; n];
    for (s, row) in counts.iter_mut().enumerate() {
        row[s] = 1;
        for &u in &order {
            for &(a, b) in edges {
                if a == u {
                    row[b] += row[u];
                }
            }
        }
    }
    Some(counts)
}

#[test]
fn c07_dag_counting() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let prime = random_prime(7);
    let (mut dags, mut count_errors) = (0, 0);
    for n in 1..=6usize {
        let all: Vec<(usize, usize)> = (0..n)
            .flat_map(|a| (0..n).filter(move |&b| b != a).map(move |b| (a, b)))
            .collect();
        for _ in 0..400 {
            let p = rng.gen_range(0.1..0.6);
            let edges: Vec<_> = all.iter().copied().filter(|_| rng.gen_bool(p)).collect();
            let Some(want) = path_counts(n, &edges) else {
                continue;
            };
            dags += 1;
            let mut d = DagCounter::with_params(n, 0.5, Some(prime)).unwrap();
            for &(a, b) in &edges {
                d.insert_edge(a, b).unwrap();
            }
            for a in 0..n {
                for b in 0..n {
                    if d.count(a, b).unwrap() as u128 != want[a][b] % prime as u128 {
                        count_errors += 1;
                    }
                }
            }
        }
    }

    let mut diamond = DynGraph::new(4, Backend::DagCounting).unwrap();
    diamond.init(&[(1, 2), (1, 3), (2, 4), (3, 4)]).unwrap();
    let mut d = DagCounter::with_params(4, 0.5, Some(prime)).unwrap();
    for (a, b) in [(0, 1), (0, 2), (1, 3), (2, 3)] {
        d.insert_edge(a, b).unwrap();
    }
    let diamond_count = d.count(0, 3).unwrap();

    let (mut yes_errors, mut no_errors, mut traces) = (0u64, 0u64, 0);
    for seed in 0..200u64 {
        let trace = generate(64, 100, Profile::DagMixed, 70_000 + seed).unwrap();
        let opts = GraphOptions {
            seed,
            ..GraphOptions::default()
        };
        let mut g = DynGraph::with_options(64, Backend::DagCounting, opts).unwrap();
        let mut oracle = DynGraph::new(64, Backend::OracleNaive).unwrap();
        traces += 1;
        for op in &trace.ops {
            match op {
                TraceOp::Init(e) => {
                    g.init(e).unwrap();
                    oracle.init(e).unwrap();
                }
                TraceOp::Insert { v, edges } => {
                    g.insert(*v, edges).unwrap();
                    oracle.insert(*v, edges).unwrap();
                }
                TraceOp::Delete(e) => {
                    g.delete(e).unwrap();
                    oracle.delete(e).unwrap();
                }
                TraceOp::Query(..) => {
                    let have = g.closure().unwrap();
                    let want = oracle.closure().unwrap();
                    yes_errors += have.minus(&want).count_ones() as u64;
                    no_errors += want.minus(&have).count_ones() as u64;
                }
            }
        }
    }

    let mut parity = DagCounter::with_params(4, 0.5, Some(2)).unwrap();
    for (a, b) in [(0, 1), (0, 2), (1, 3), (2, 3)] {
        parity.insert_edge(a, b).unwrap();
    }
    let parity_answer = parity.query(0, 3).unwrap();

    let pass = dags > 0
        && count_errors == 0
        && diamond_count == 2
        && diamond.query(1, 4).unwrap()
        && yes_errors == 0
        && !parity_answer;
    let detail = format!(
        "{dags} random DAGs (n<=6) with {count_errors} count errors; diamond M[1,4]={diamond_count}; \
         {traces} dag-mixed traces at n=64 with {yes_errors} false yes and {no_errors} false no; \
         p=2 two-path query returns {}",
        u8::from(parity_answer)
    );
    gate(7, "DAG counting correctness", pass, detail, start);
}

#[test]
fn c08_deletion_inverse() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (mut instances, mut failures) = (0, Vec::new());
    for inst in 0..100u64 {
        let n = rng.gen_range(2..=32);
        let mut rank: Vec<usize> = (0..=n).collect();
        rank[1..].shuffle(&mut rng);
        let orient = |a: usize, b: usize| if rank[a] < rank[b] { (a, b) } else { (b, a) };
        let mut base = Vec::new();
        for _ in 0..n {
            let (a, b) = (rng.gen_range(1..=n), rng.gen_range(1..=n));
            if a != b {
                base.push(orient(a, b));
            }
        }
        let v = rng.gen_range(1..=n);
        let mut star = Vec::new();
        for _ in 0..rng.gen_range(1..=4) {
            let u = rng.gen_range(1..=n);
            if u != v {
                star.push(orient(u, v));
            }
        }
        for backend in Backend::ALL {
            instances += 1;
            let opts = GraphOptions {
                seed: inst,
                ..GraphOptions::default()
            };
            let mut g = DynGraph::with_options(n, backend, opts).unwrap();
            g.init(&base).unwrap();
            let fresh: Vec<_> = star
                .iter()
                .copied()
                .filter(|&(a, b)| !g.has_edge(a, b).unwrap())
                .collect();
            let before = g.closure().unwrap();
            g.insert(v, &fresh).unwrap();
            g.delete(&fresh).unwrap();
            if g.closure().unwrap() != before {
                failures.push(format!("instance {inst} on {backend}"));
            }
        }
    }
    let detail = format!(
        "{instances} backend instances (n<=32), {} not restored",
        failures.len()
    );
    gate(8, "deletion inverse", failures.is_empty(), detail, start);
}

#[test]
fn c09_amortized_trend_soft() {
    let start = Instant::now();
    let ns = vec![32, 64, 128, 256];
    let mixed = BenchConfig {
        ns: ns.clone(),
        profile: Profile::Mixed,
        backends: vec![Backend::DivCon],
        reps: 2,
        length: 60,
        seed: 9,
        options: GraphOptions::default(),
    };
    let decremental = BenchConfig {
        profile: Profile::Decremental,
        reps: 1,
        ..mixed.clone()
    };
    let update = bench::run(&mixed, |_| {})
        .unwrap()
        .work_slope(Backend::DivCon, OpClass::Update);
    let reset = bench::run(&decremental, |_| {})
        .unwrap()
        .work_slope(Backend::DivCon, OpClass::Delete);
    let within = |s: Option<f64>, lo: f64, hi: f64| s.is_some_and(|s| (lo..=hi).contains(&s));
    let pass = within(update, 1.6, 2.4) && within(reset, 0.7, 1.5);
    let fmt = |s: Option<f64>| s.map_or("n/a".to_string(), |s| format!("{s:.2}"));
    let detail = format!(
        "soft, not gating: divcon update work slope {} (target 1.6..2.4), \
         decremental reset work slope {} (target 0.7..1.5) over n in {ns:?}",
        fmt(update),
        fmt(reset)
    );
    report(9, "amortized trend", pass, &detail, start.elapsed());
}

#[test]
fn c10_centered_delta_lemma() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let n = 8;
    let (mut props_bad, mut square_bad) = (0, 0);
    for _ in 0..1000 {
        let density = rng.gen_range(0.0..0.3);
        let x = random_matrix(&mut rng, n, density);
        let i = rng.gen_range(0..n);
        let d = random_centered(&mut rng, n, i);
        if delta_props_check(&x, &d, i).unwrap() != (true, true) {
            props_bad += 1;
        }
    }
    for _ in 0..1000 {
        let density = rng.gen_range(0.0..0.3);
        let x = closure_oracle(&random_matrix(&mut rng, n, density));
        let i = rng.gen_range(0..n);
        let d = random_centered(&mut rng, n, i);
        let ds = closure_oracle(&x.add(&d).unwrap()).minus(&x);
        if !squaring_identity_holds(&x, &ds, i).unwrap() {
            square_bad += 1;
        }
    }
    let detail = format!(
        "1000 (X, centered delta) pairs with {props_bad} property failures; \
         1000 squaring instances with {square_bad} failures"
    );
    gate(
        10,
        "centered-delta lemma",
        props_bad == 0 && square_bad == 0,
        detail,
        start,
    );
}
