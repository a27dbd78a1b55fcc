//! Path counting on acyclic graphs against direct enumeration.

#![allow(clippy::needless_range_loop)]

use dyntc::dag_counter::random_prime;
use dyntc::{DagCounter, Error};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Number of paths between every ordered pair, by memoised recursion.
fn path_counts(n: usize, edges: &[(usize, usize)]) -> Option<Vec<Vec<u128>>> {
    let mut out = vec![Vec::new(); n];
    for &(a, b) in edges {
        out[a].push(b);
    }
    let mut state = vec![0u8; n];
    let mut order = Vec::new();
    fn visit(u: usize, out: &[Vec<usize>], state: &mut [u8], order: &mut Vec<usize>) -> bool {
        state[u] = 1;
        for &v in &out[u] {
            if state[v] == 1 || (state[v] == 0 && !visit(v, out, state, order)) {
                return false;
            }
        }
        state[u] = 2;
        order.push(u);
        true
    }
    for u in 0..n {
        if state[u] == 0 && !visit(u, &out, &mut state, &mut order) {
            return None;
        }
    }
    let mut counts = vec![vec![0u128; n]; n];
    for s in 0..n {
        for &u in order.iter().rev() {
            let here = if u == s { 1 } else { counts[s][u] };
            counts[s][u] = here;
            if here > 0 {
                for &v in &out[u] {
                    counts[s][v] += here;
                }
            }
        }
    }
    Some(counts)
}

fn all_edges(n: usize) -> Vec<(usize, usize)> {
    (0..n)
        .flat_map(|a| (0..n).filter(move |&b| b != a).map(move |b| (a, b)))
        .collect()
}

#[test]
fn complete_dag_counts_powers_of_two() {
    let n = 6;
    let mut d = DagCounter::new(n, 3).unwrap();
    for a in 0..n {
        for b in a + 1..n {
            d.insert_edge(a, b).unwrap();
        }
    }
    assert_eq!(d.count(0, 5).unwrap(), 16);
    assert_eq!(d.count(1, 4).unwrap(), 4);
    assert_eq!(d.count(5, 0).unwrap(), 0);
}

#[test]
fn exhaustive_small_dags() {
    let p = random_prime(11);
    for n in 1..=4 {
        let edges = all_edges(n);
        for mask in 0u32..(1 << edges.len()) {
            let chosen: Vec<_> = (0..edges.len())
                .filter(|&k| mask >> k & 1 == 1)
                .map(|k| edges[k])
                .collect();
            let Some(want) = path_counts(n, &chosen) else {
                continue;
            };
            let mut d = DagCounter::with_params(n, 0.5, Some(p)).unwrap();
            for &(a, b) in &chosen {
                d.insert_edge(a, b).unwrap();
            }
            for a in 0..n {
                for b in 0..n {
                    assert_eq!(d.count(a, b).unwrap() as u128, want[a][b] % p as u128);
                }
            }
        }
    }
}

#[test]
fn cycle_error_reports_path() {
    let mut d = DagCounter::new(4, 0).unwrap();
    d.insert_edge(0, 1).unwrap();
    d.insert_edge(1, 3).unwrap();
    match d.insert_edge(3, 0) {
        Err(Error::Cycle { path, .. }) => assert_eq!(path, vec![0, 1, 3]),
        other => panic!("expected a cycle error, got {other:?}"),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    /// Random insertions and deletions along a hidden topological order keep
    /// every count equal to direct enumeration.
    #[test]
    fn counts_follow_updates(seed in any::<u64>(), n in 2usize..12, eps in 0.0f64..=1.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut rng);
        let p = random_prime(seed);
        let mut d = DagCounter::with_params(n, eps, Some(p)).unwrap();
        let mut edges: Vec<(usize, usize)> = Vec::new();
        for _ in 0..40 {
            if edges.is_empty() || rng.gen_bool(0.6) {
                let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
                let (a, b) = (order[i.min(j)], order[i.max(j)]);
                if a == b || edges.contains(&(a, b)) {
                    continue;
                }
                d.insert_edge(a, b).unwrap();
                edges.push((a, b));
            } else {
                let (a, b) = edges.swap_remove(rng.gen_range(0..edges.len()));
                d.delete_edge(a, b).unwrap();
            }
            let want = path_counts(n, &edges).unwrap();
            for a in 0..n {
                for b in 0..n {
                    prop_assert_eq!(d.count(a, b).unwrap() as u128, want[a][b] % p as u128);
                }
            }
        }
        let mut sorted = edges.clone();
        sorted.sort_unstable();
        prop_assert_eq!(d.edges(), sorted);
    }
}
