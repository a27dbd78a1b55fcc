//! Buffered integer matrix against an eagerly updated mirror.

#![allow(clippy::needless_range_loop)]

use dyntc::lazy_intmat::{is_prime, IntMatrix};
use dyntc::LazyIntMatrix;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Eager mirror: every update is applied to every entry immediately.
struct Mirror {
    n: usize,
    data: Vec<i128>,
    modulus: Option<u64>,
}

impl Mirror {
    fn update(&mut self, j: &[i64], i: &[i64]) {
        for x in 0..self.n {
            for y in 0..self.n {
                let v = &mut self.data[x * self.n + y];
                match self.modulus {
                    Some(p) => {
                        let p = p as i128;
                        *v = (*v + (j[x] as i128).rem_euclid(p) * (i[y] as i128).rem_euclid(p))
                            .rem_euclid(p);
                    }
                    None => *v = (*v as i64).wrapping_add(j[x].wrapping_mul(i[y])) as i128,
                }
            }
        }
    }

    fn get(&self, x: usize, y: usize) -> i64 {
        self.data[x * self.n + y] as i64
    }
}

fn run(seed: u64, n: usize, eps: f64, modulus: Option<u64>, ops: usize) -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut lazy = LazyIntMatrix::new(n, eps, modulus).unwrap();
    let mut mirror = Mirror {
        n,
        data: vec![0; n * n],
        modulus,
    };
    for step in 0..ops {
        if rng.gen_bool(0.5) {
            let j: Vec<i64> = (0..n).map(|_| rng.gen_range(-3..4)).collect();
            let i: Vec<i64> = (0..n).map(|_| rng.gen_range(-3..4)).collect();
            lazy.update(&j, &i).unwrap();
            mirror.update(&j, &i);
        } else {
            let (x, y) = (rng.gen_range(0..n), rng.gen_range(0..n));
            let got = lazy.lookup(x, y).unwrap();
            if got != mirror.get(x, y) {
                return Err(format!(
                    "step {step}: ({x},{y}) is {got}, expected {}",
                    mirror.get(x, y)
                ));
            }
        }
        if lazy.buffered() > lazy.cap() {
            return Err(format!("step {step}: {} buffered updates", lazy.buffered()));
        }
    }
    Ok(())
}

#[test]
fn cap_values() {
    assert_eq!(LazyIntMatrix::new(64, 0.5, None).unwrap().cap(), 8);
    assert_eq!(LazyIntMatrix::new(64, 0.0, None).unwrap().cap(), 1);
    assert_eq!(LazyIntMatrix::new(64, 1.0, None).unwrap().cap(), 64);
    assert!(LazyIntMatrix::new(4, 1.5, None).is_err());
}

#[test]
fn init_then_rank_one() {
    let mut m = LazyIntMatrix::new(2, 1.0, Some(5)).unwrap();
    m.init(&IntMatrix::identity(2)).unwrap();
    m.update(&[2, 3], &[4, 1]).unwrap();
    assert_eq!(m.lookup(0, 0).unwrap(), 4);
    assert_eq!(m.lookup(1, 0).unwrap(), 2);
    assert_eq!(m.lookup(1, 1).unwrap(), 4);
}

#[test]
fn mersenne_prime_is_accepted() {
    let p = (1u64 << 61) - 1;
    assert!(is_prime(p));
    assert!(LazyIntMatrix::new(3, 0.5, Some(p)).is_ok());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn lookups_match_mirror(
        seed in any::<u64>(),
        n in 1usize..20,
        eps in prop::sample::select(vec![0.0, 0.3, 0.5, 1.0]),
        modulus in prop::sample::select(vec![None, Some(2u64), Some(1_000_000_007), Some((1u64 << 61) - 1)]),
    ) {
        prop_assert_eq!(run(seed, n, eps, modulus, 300), Ok(()));
    }
}
