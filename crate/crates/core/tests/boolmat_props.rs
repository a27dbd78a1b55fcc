//! Closure algorithms and matrix kernels against reference computations.

mod common;

use common::{m, matrix};
use dyntc::{closure_munro, closure_munro_h, closure_oracle, BoolMatrix};
use proptest::prelude::*;

/// Entry-by-entry product, independent of the word-parallel kernel.
fn naive_mul(a: &BoolMatrix, b: &BoolMatrix) -> BoolMatrix {
    let n = a.n();
    let mut c = BoolMatrix::new(n);
    for x in 0..n {
        for z in 0..n {
            if (0..n).any(|y| a.get(x, y) && b.get(y, z)) {
                c.set(x, z);
            }
        }
    }
    c
}

/// Reachability by breadth-first search from every vertex.
fn bfs_closure(a: &BoolMatrix) -> BoolMatrix {
    let n = a.n();
    let mut c = BoolMatrix::new(n);
    for s in 0..n {
        let mut queue = vec![s];
        c.set(s, s);
        while let Some(u) = queue.pop() {
            for v in 0..n {
                if a.get(u, v) && !c.get(s, v) {
                    c.set(s, v);
                    queue.push(v);
                }
            }
        }
    }
    c
}

#[test]
fn path_closure_is_upper_triangular() {
    let c = closure_oracle(&m(4, &[(0, 1), (1, 2), (2, 3)]));
    assert_eq!(c.count_ones(), 10);
    assert!(c.get(0, 3) && !c.get(3, 0));
}

#[test]
fn two_disjoint_cycles() {
    let x = m(5, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 3)]);
    for c in [closure_oracle(&x), closure_munro(&x), closure_munro_h(&x)] {
        assert_eq!(c.count_ones(), 13);
        assert!(!c.get(0, 3) && !c.get(4, 2));
    }
}

#[test]
fn text_format_round_trip() {
    let x = BoolMatrix::parse_text("3\n010\n001\n000\n").unwrap();
    assert_eq!(x, m(3, &[(0, 1), (1, 2)]));
    assert_eq!(BoolMatrix::parse_text(&x.to_text()).unwrap(), x);
    assert!(BoolMatrix::parse_text("2\n01\n0\n").is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn oracle_matches_bfs(x in (1usize..20).prop_flat_map(|n| matrix(n, 0.15))) {
        prop_assert_eq!(closure_oracle(&x), bfs_closure(&x));
    }

    #[test]
    fn block_recursions_match_oracle(x in (1usize..24).prop_flat_map(|n| matrix(n, 0.12))) {
        let want = closure_oracle(&x);
        prop_assert_eq!(closure_munro(&x), want.clone());
        prop_assert_eq!(closure_munro_h(&x), want);
    }

    #[test]
    fn closure_is_idempotent_and_reflexive(x in (1usize..20).prop_flat_map(|n| matrix(n, 0.2))) {
        let c = closure_oracle(&x);
        prop_assert_eq!(closure_oracle(&c), c.clone());
        prop_assert!(x.is_subset_of(&c));
        prop_assert!(BoolMatrix::identity(x.n()).is_subset_of(&c));
        prop_assert_eq!(c.mul(&c).unwrap(), c);
    }

    #[test]
    fn product_matches_naive(
        (a, b) in (1usize..70).prop_flat_map(|n| (matrix(n, 0.1), matrix(n, 0.1)))
    ) {
        prop_assert_eq!(a.mul(&b).unwrap(), naive_mul(&a, &b));
    }

    #[test]
    fn blocks_reassemble(x in (1usize..12).prop_flat_map(|k| matrix(2 * k, 0.3))) {
        let h = x.n() / 2;
        let y = BoolMatrix::from_blocks(
            &x.block(0, 0, h), &x.block(0, h, h), &x.block(h, 0, h), &x.block(h, h, h),
        );
        prop_assert_eq!(y, x);
    }
}
