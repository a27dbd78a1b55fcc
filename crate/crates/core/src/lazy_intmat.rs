//! Integer matrices with buffered rank-one updates.
//!
//! The logical matrix is `M = Lazy + BufJ · BufI`, where the buffers hold the
//! last `t` column vectors `J` and row vectors `I` of pending updates
//! `M <- M + J · I`. A lookup adds the `t` buffered products to one entry of
//! `Lazy`; once `cap = ceil(n^eps)` updates are buffered, the next update
//! first folds the buffers into `Lazy` with a rectangular product.
//!
//! Arithmetic is modulo a prime `p` when one is configured and wrapping
//! 64-bit otherwise.

use crate::error::{Error, Result};

/// Dense row-major `n x n` matrix of 64-bit integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    n: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    /// All-zero matrix.
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0; n * n],
        }
    }

    /// Identity matrix.
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Dimension.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Entry `(x, y)`.
    pub fn get(&self, x: usize, y: usize) -> i64 {
        self.data[x * self.n + y]
    }

    /// Writes entry `(x, y)`.
    pub fn set(&mut self, x: usize, y: usize, v: i64) {
        self.data[x * self.n + y] = v;
    }
}

/// Arithmetic of the matrix entries: wrapping 64-bit or modulo a prime.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Ring {
    Wrapping,
    Mod(u64),
}

impl Ring {
    #[inline]
    fn reduce(self, v: i64) -> i64 {
        match self {
            Ring::Wrapping => v,
            Ring::Mod(p) => v.rem_euclid(p as i64),
        }
    }

    #[inline]
    fn add(self, a: i64, b: i64) -> i64 {
        match self {
            Ring::Wrapping => a.wrapping_add(b),
            Ring::Mod(p) => ((a as u128 + b as u128) % p as u128) as i64,
        }
    }

    #[inline]
    fn mul(self, a: i64, b: i64) -> i64 {
        match self {
            Ring::Wrapping => a.wrapping_mul(b),
            Ring::Mod(p) => ((a as u128 * b as u128) % p as u128) as i64,
        }
    }
}

/// Integer matrix supporting rank-one updates and single-entry lookups.
#[derive(Clone, Debug)]
pub struct LazyIntMatrix {
    n: usize,
    epsilon: f64,
    cap: usize,
    ring: Ring,
    lazy: Vec<i64>,
    /// Column vectors, stored one after another (`buf_j[j * n + x]`).
    buf_j: Vec<i64>,
    /// Row vectors, stored one after another (`buf_i[j * n + y]`).
    buf_i: Vec<i64>,
    t: usize,
    reconstructions: u64,
    work: u64,
}

impl LazyIntMatrix {
    /// Zero matrix with buffering exponent `epsilon ∈ [0, 1]` and an optional
    /// modulus, which must be a prime below `2^62`.
    pub fn new(n: usize, epsilon: f64, modulus: Option<u64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("dimension must be positive".into()));
        }
        if !(0.0..=1.0).contains(&epsilon) {
            return Err(Error::InvalidParameter(format!(
                "epsilon must lie in [0, 1], got {epsilon}"
            )));
        }
        let ring = match modulus {
            None => Ring::Wrapping,
            Some(p) => {
                if p >= 1 << 62 || !is_prime(p) {
                    return Err(Error::NotPrime(p));
                }
                Ring::Mod(p)
            }
        };
        let cap = ((n as f64).powf(epsilon).ceil() as usize).max(1);
        Ok(Self {
            n,
            epsilon,
            cap,
            ring,
            lazy: vec![0; n * n],
            buf_j: vec![0; n * cap],
            buf_i: vec![0; n * cap],
            t: 0,
            reconstructions: 0,
            work: 0,
        })
    }

    /// Dimension.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Buffering exponent.
    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// Maximum number of buffered updates, `max(1, ceil(n^eps))`.
    pub fn cap(&self) -> usize {
        self.cap
    }

    /// Number of currently buffered updates.
    pub fn buffered(&self) -> usize {
        self.t
    }

    /// Modulus, if any.
    pub fn modulus(&self) -> Option<u64> {
        match self.ring {
            Ring::Wrapping => None,
            Ring::Mod(p) => Some(p),
        }
    }

    /// Number of times the buffers were folded into the explicit matrix.
    pub fn reconstructions(&self) -> u64 {
        self.reconstructions
    }

    /// Cumulative multiply-add count of lookups, updates and reconstructions.
    pub fn work_units(&self) -> u64 {
        self.work
    }

    /// Replaces the matrix with `x` and empties the buffers.
    pub fn init(&mut self, x: &IntMatrix) -> Result<()> {
        if x.n != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: x.n,
            });
        }
        for (dst, &v) in self.lazy.iter_mut().zip(&x.data) {
            *dst = self.ring.reduce(v);
        }
        self.t = 0;
        Ok(())
    }

    /// Applies `M <- M + J · I` for a column vector `j` and a row vector `i`.
    pub fn update(&mut self, j: &[i64], i: &[i64]) -> Result<()> {
        for v in [j, i] {
            if v.len() != self.n {
                return Err(Error::DimensionMismatch {
                    expected: self.n,
                    got: v.len(),
                });
            }
        }
        if self.t == self.cap {
            self.reconstruct();
        }
        let (n, t) = (self.n, self.t);
        for x in 0..n {
            self.buf_j[t * n + x] = self.ring.reduce(j[x]);
            self.buf_i[t * n + x] = self.ring.reduce(i[x]);
        }
        self.t += 1;
        self.work += 2 * n as u64;
        Ok(())
    }

    fn reconstruct(&mut self) {
        let n = self.n;
        let ring = self.ring;
        for k in 0..self.t {
            let col = &self.buf_j[k * n..(k + 1) * n];
            let row = &self.buf_i[k * n..(k + 1) * n];
            for (x, &a) in col.iter().enumerate() {
                if a == 0 {
                    continue;
                }
                let dst = &mut self.lazy[x * n..(x + 1) * n];
                for y in 0..n {
                    dst[y] = ring.add(dst[y], ring.mul(a, row[y]));
                }
            }
        }
        self.work += (self.t * n * n) as u64;
        self.t = 0;
        self.reconstructions += 1;
    }

    /// Entry `(x, y)` of the logical matrix.
    pub fn lookup(&mut self, x: usize, y: usize) -> Result<i64> {
        for idx in [x, y] {
            if idx >= self.n {
                return Err(Error::IndexOutOfRange {
                    index: idx,
                    n: self.n,
                });
            }
        }
        self.work += self.t as u64 + 1;
        Ok(self.peek(x, y))
    }

    /// Entry `(x, y)` without touching the work counter.
    pub fn peek(&self, x: usize, y: usize) -> i64 {
        let n = self.n;
        let mut v = self.lazy[x * n + y];
        for k in 0..self.t {
            v = self.ring.add(
                v,
                self.ring.mul(self.buf_j[k * n + x], self.buf_i[k * n + y]),
            );
        }
        v
    }

    /// Dense copy of the logical matrix.
    pub fn to_dense(&self) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.n);
        for x in 0..self.n {
            for y in 0..self.n {
                m.set(x, y, self.peek(x, y));
            }
        }
        m
    }
}

/// Deterministic Miller-Rabin primality test for 64-bit integers.
pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for q in SMALL {
        if p.is_multiple_of(q) {
            return p == q;
        }
    }
    let mul = |a: u64, b: u64| ((a as u128 * b as u128) % p as u128) as u64;
    let pow = |mut b: u64, mut e: u64| {
        let mut r = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                r = mul(r, b);
            }
            b = mul(b, b);
            e >>= 1;
        }
        r
    };
    let (mut d, mut s) = (p - 1, 0);
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in SMALL {
        let mut x = pow(a, d);
        if x == 1 || x == p - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul(x, x);
            if x == p - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit(n: usize, i: usize) -> Vec<i64> {
        let mut v = vec![0; n];
        v[i] = 1;
        v
    }

    #[test]
    fn primes() {
        assert!(is_prime(2) && is_prime(7) && is_prime(2_305_843_009_213_693_951));
        assert!(!is_prime(1) && !is_prime(9) && !is_prime(3_215_031_751));
    }

    #[test]
    fn single_update() {
        let mut m = LazyIntMatrix::new(4, 0.5, None).unwrap();
        m.update(&unit(4, 0), &unit(4, 1)).unwrap();
        assert_eq!(m.lookup(0, 1).unwrap(), 1);
        assert_eq!(m.lookup(1, 0).unwrap(), 0);
    }

    #[test]
    fn modular_reduction() {
        let mut m = LazyIntMatrix::new(2, 0.0, Some(7)).unwrap();
        for _ in 0..10 {
            m.update(&unit(2, 0), &unit(2, 1)).unwrap();
        }
        assert_eq!(m.lookup(0, 1).unwrap(), 3);
        assert!(LazyIntMatrix::new(2, 0.0, Some(8)).is_err());
    }

    #[test]
    fn one_reconstruction_after_cap_plus_one_updates() {
        let mut m = LazyIntMatrix::new(16, 0.5, None).unwrap();
        assert_eq!(m.cap(), 4);
        for k in 0..5 {
            m.update(&unit(16, k), &unit(16, k)).unwrap();
            assert!(m.buffered() <= m.cap());
        }
        assert_eq!(m.reconstructions(), 1);
        for k in 0..5 {
            assert_eq!(m.lookup(k, k).unwrap(), 1);
        }
    }

    #[test]
    fn init_discards_buffers() {
        let mut m = LazyIntMatrix::new(3, 1.0, None).unwrap();
        m.update(&[1, 1, 1], &[2, 2, 2]).unwrap();
        m.init(&IntMatrix::identity(3)).unwrap();
        assert_eq!(m.buffered(), 0);
        assert_eq!(m.to_dense(), IntMatrix::identity(3));
    }
}
