//! Shared generators for the integration tests.

#![allow(dead_code)]

use dyntc::BoolMatrix;
use proptest::prelude::*;
use rand::Rng;

/// Strategy for an `n x n` matrix where each entry is 1 with probability `density`.
pub fn matrix(n: usize, density: f64) -> impl Strategy<Value = BoolMatrix> {
    proptest::collection::vec(proptest::bool::weighted(density), n * n).prop_map(move |bits| {
        let mut m = BoolMatrix::new(n);
        for (k, b) in bits.into_iter().enumerate() {
            if b {
                m.set(k / n, k % n);
            }
        }
        m
    })
}

/// Random matrix drawn from `rng`.
pub fn random_matrix<R: Rng>(rng: &mut R, n: usize, density: f64) -> BoolMatrix {
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

/// Random update confined to row and column `i`.
pub fn random_centered<R: Rng>(rng: &mut R, n: usize, i: usize, max: usize) -> BoolMatrix {
    let mut d = BoolMatrix::new(n);
    for _ in 0..rng.gen_range(0..=max) {
        let u = rng.gen_range(0..n);
        if rng.gen_bool(0.5) {
            d.set(i, u);
        } else {
            d.set(u, i);
        }
    }
    d
}

/// Random subset of the 1's of `x`, each kept with probability `p`.
pub fn random_subset<R: Rng>(rng: &mut R, x: &BoolMatrix, p: f64) -> BoolMatrix {
    let mut d = BoolMatrix::new(x.n());
    for (a, b) in x.ones_iter() {
        if rng.gen_bool(p) {
            d.set(a, b);
        }
    }
    d
}

/// Builds a matrix from a list of 0-based entries.
pub fn m(n: usize, entries: &[(usize, usize)]) -> BoolMatrix {
    BoolMatrix::from_entries(n, entries.iter().copied()).unwrap()
}
