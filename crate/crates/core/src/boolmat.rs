//! Dense bit-packed Boolean matrices.
//!
//! Rows are stored as contiguous runs of `u64` words, so row-wise OR, AND-NOT
//! and the row-by-row multiplication kernel work a word at a time. Indices are
//! 0-based. Besides the algebra, the module provides the static closure
//! routines the dynamic structures are checked against: a Floyd-Warshall style
//! reference closure and two recursive block formulations of the Kleene closure.

use std::fmt;

use crate::error::{Error, Result};

/// Square Boolean matrix of fixed dimension `n >= 1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BoolMatrix {
    n: usize,
    words: usize,
    data: Vec<u64>,
}

impl BoolMatrix {
    /// All-zero `n x n` matrix.
    ///
    /// # Panics
    /// Panics if `n == 0`.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "matrix dimension must be at least 1");
        let words = n.div_ceil(64);
        Self {
            n,
            words,
            data: vec![0; n * words],
        }
    }

    /// The `n x n` identity matrix.
    pub fn identity(n: usize) -> Self {
        let mut m = Self::new(n);
        for i in 0..n {
            m.set(i, i);
        }
        m
    }

    /// The `n x n` matrix with every entry set.
    pub fn ones(n: usize) -> Self {
        let mut m = Self::new(n);
        for x in 0..n {
            m.fill_row(x);
        }
        m
    }

    /// Builds a matrix from a list of 0-based `(row, col)` entries.
    pub fn from_entries<I>(n: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut m = Self::new(n);
        for (x, y) in entries {
            m.check_index(x)?;
            m.check_index(y)?;
            m.set(x, y);
        }
        Ok(m)
    }

    /// Dimension of the matrix.
    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of `u64` words per row.
    #[inline]
    pub fn words_per_row(&self) -> usize {
        self.words
    }

    /// Returns an error unless `i < n`.
    pub fn check_index(&self, i: usize) -> Result<()> {
        if i < self.n {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange {
                index: i,
                n: self.n,
            })
        }
    }

    /// Returns an error unless `other` has the same dimension.
    pub fn check_same_dim(&self, other: &BoolMatrix) -> Result<()> {
        if self.n == other.n {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.n,
                got: other.n,
            })
        }
    }

    /// Entry `(x, y)`.
    #[inline]
    pub fn get(&self, x: usize, y: usize) -> bool {
        debug_assert!(x < self.n && y < self.n);
        (self.data[x * self.words + y / 64] >> (y % 64)) & 1 == 1
    }

    /// Sets entry `(x, y)` to 1.
    #[inline]
    pub fn set(&mut self, x: usize, y: usize) {
        debug_assert!(x < self.n && y < self.n);
        self.data[x * self.words + y / 64] |= 1u64 << (y % 64);
    }

    /// Sets entry `(x, y)` to 0.
    #[inline]
    pub fn unset(&mut self, x: usize, y: usize) {
        debug_assert!(x < self.n && y < self.n);
        self.data[x * self.words + y / 64] &= !(1u64 << (y % 64));
    }

    /// Writes `value` into entry `(x, y)`.
    #[inline]
    pub fn assign(&mut self, x: usize, y: usize, value: bool) {
        if value {
            self.set(x, y)
        } else {
            self.unset(x, y)
        }
    }

    /// Packed words of row `x`.
    #[inline]
    pub fn row(&self, x: usize) -> &[u64] {
        &self.data[x * self.words..(x + 1) * self.words]
    }

    /// Mutable packed words of row `x`. Callers must keep bits beyond `n` clear.
    #[inline]
    pub fn row_mut(&mut self, x: usize) -> &mut [u64] {
        &mut self.data[x * self.words..(x + 1) * self.words]
    }

    fn fill_row(&mut self, x: usize) {
        let n = self.n;
        let words = self.words;
        let row = self.row_mut(x);
        for w in row.iter_mut() {
            *w = !0;
        }
        let tail = n % 64;
        if tail != 0 {
            row[words - 1] = (1u64 << tail) - 1;
        }
    }

    /// Clears every entry.
    pub fn clear(&mut self) {
        self.data.iter_mut().for_each(|w| *w = 0);
    }

    /// True when no entry is set.
    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&w| w == 0)
    }

    /// Number of set entries.
    pub fn count_ones(&self) -> usize {
        self.data.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Iterator over the column indices set in row `x`, in increasing order.
    pub fn row_ones(&self, x: usize) -> BitIter<'_> {
        BitIter::new(self.row(x))
    }

    /// Iterator over all set entries in row-major order.
    pub fn ones_iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |x| self.row_ones(x).map(move |y| (x, y)))
    }

    /// In-place union with `other`.
    pub fn or_assign(&mut self, other: &BoolMatrix) {
        debug_assert_eq!(self.n, other.n);
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a |= *b;
        }
    }

    /// In-place intersection with `other`.
    pub fn and_assign(&mut self, other: &BoolMatrix) {
        debug_assert_eq!(self.n, other.n);
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a &= *b;
        }
    }

    /// In-place removal of the entries of `other` (no subset check).
    pub fn and_not_assign(&mut self, other: &BoolMatrix) {
        debug_assert_eq!(self.n, other.n);
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a &= !*b;
        }
    }

    /// Entries of `self` that are not in `other`.
    pub fn minus(&self, other: &BoolMatrix) -> BoolMatrix {
        let mut out = self.clone();
        out.and_not_assign(other);
        out
    }

    /// True when every entry of `self` is also set in `other`.
    pub fn is_subset_of(&self, other: &BoolMatrix) -> bool {
        self.n == other.n && self.data.iter().zip(&other.data).all(|(a, b)| a & !b == 0)
    }

    /// First entry of `self` missing from `other`, if any.
    pub fn first_outside(&self, other: &BoolMatrix) -> Option<(usize, usize)> {
        for x in 0..self.n {
            for (w, (a, b)) in self.row(x).iter().zip(other.row(x)).enumerate() {
                let extra = a & !b;
                if extra != 0 {
                    return Some((x, w * 64 + extra.trailing_zeros() as usize));
                }
            }
        }
        None
    }

    /// Transposed copy.
    pub fn transpose(&self) -> BoolMatrix {
        let mut t = BoolMatrix::new(self.n);
        for (x, y) in self.ones_iter() {
            t.set(y, x);
        }
        t
    }

    /// Boolean product `self · other` with a row-by-row word-parallel kernel.
    pub fn mul(&self, other: &BoolMatrix) -> Result<BoolMatrix> {
        self.check_same_dim(other)?;
        let mut out = BoolMatrix::new(self.n);
        let words = self.words;
        for x in 0..self.n {
            let (dst, src) = (x * words, &self.data[x * words..(x + 1) * words]);
            for y in BitIter::new(src) {
                let row = other.row(y);
                for (d, &r) in out.data[dst..dst + words].iter_mut().zip(row) {
                    *d |= r;
                }
            }
        }
        Ok(out)
    }

    /// Entrywise OR.
    pub fn add(&self, other: &BoolMatrix) -> Result<BoolMatrix> {
        self.check_same_dim(other)?;
        let mut out = self.clone();
        out.or_assign(other);
        Ok(out)
    }

    /// Entrywise AND-NOT, requiring `delta ⊆ self`.
    pub fn sub(&self, delta: &BoolMatrix) -> Result<BoolMatrix> {
        self.check_same_dim(delta)?;
        if let Some((row, col)) = delta.first_outside(self) {
            return Err(Error::NotSubset { row, col });
        }
        Ok(self.minus(delta))
    }

    /// Copy of row `i` only (all other rows zero).
    pub fn row_slab(&self, i: usize) -> Result<BoolMatrix> {
        self.check_index(i)?;
        let mut out = BoolMatrix::new(self.n);
        out.row_mut(i).copy_from_slice(self.row(i));
        Ok(out)
    }

    /// Copy of column `i` only (all other columns zero).
    pub fn col_slab(&self, i: usize) -> Result<BoolMatrix> {
        self.check_index(i)?;
        let mut out = BoolMatrix::new(self.n);
        for x in 0..self.n {
            if self.get(x, i) {
                out.set(x, i);
            }
        }
        Ok(out)
    }

    /// Row `i` together with column `i`; everything else zero.
    pub fn cross_slab(&self, i: usize) -> Result<BoolMatrix> {
        let mut out = self.row_slab(i)?;
        for x in 0..self.n {
            if self.get(x, i) {
                out.set(x, i);
            }
        }
        Ok(out)
    }

    /// True when every set entry lies in row `i` or column `i`.
    pub fn is_centered_at(&self, i: usize) -> bool {
        self.ones_iter().all(|(x, y)| x == i || y == i)
    }

    /// The `m x m` block whose top-left corner is `(r0, c0)`.
    pub fn block(&self, r0: usize, c0: usize, m: usize) -> BoolMatrix {
        let mut out = BoolMatrix::new(m);
        for x in 0..m {
            for y in self.row_ones(r0 + x) {
                if y >= c0 && y < c0 + m {
                    out.set(x, y - c0);
                }
            }
        }
        out
    }

    /// Overwrites the `m x m` block at `(r0, c0)` with `src`.
    pub fn set_block(&mut self, r0: usize, c0: usize, src: &BoolMatrix) {
        let m = src.n;
        for x in 0..m {
            for y in 0..m {
                self.assign(r0 + x, c0 + y, src.get(x, y));
            }
        }
    }

    /// Assembles a `2m x 2m` matrix from its four `m x m` blocks.
    pub fn from_blocks(
        a: &BoolMatrix,
        b: &BoolMatrix,
        c: &BoolMatrix,
        d: &BoolMatrix,
    ) -> BoolMatrix {
        let m = a.n;
        let mut out = BoolMatrix::new(2 * m);
        out.set_block(0, 0, a);
        out.set_block(0, m, b);
        out.set_block(m, 0, c);
        out.set_block(m, m, d);
        out
    }

    /// Copy embedded in the top-left corner of a larger zero matrix.
    pub fn padded(&self, big: usize) -> BoolMatrix {
        assert!(big >= self.n);
        let mut out = BoolMatrix::new(big);
        for (x, y) in self.ones_iter() {
            out.set(x, y);
        }
        out
    }

    /// Top-left `small x small` corner.
    pub fn truncated(&self, small: usize) -> BoolMatrix {
        self.block(0, 0, small)
    }

    /// Parses the fixture text format: a first line holding `n`, then `n`
    /// lines of `n` characters from `{0,1}`. Blank lines and lines starting
    /// with `#` are ignored.
    pub fn parse_text(text: &str) -> Result<BoolMatrix> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (line_no, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            msg: "missing dimension line".into(),
        })?;
        let n: usize = header.parse().map_err(|_| Error::Parse {
            line: line_no,
            msg: format!("bad dimension {header:?}"),
        })?;
        if n == 0 {
            return Err(Error::Parse {
                line: line_no,
                msg: "dimension must be positive".into(),
            });
        }
        let mut m = BoolMatrix::new(n);
        for x in 0..n {
            let (line_no, row) = lines.next().ok_or(Error::Parse {
                line: line_no + x + 1,
                msg: format!("expected {n} rows, found {x}"),
            })?;
            if row.chars().count() != n {
                return Err(Error::Parse {
                    line: line_no,
                    msg: format!("expected {n} characters"),
                });
            }
            for (y, ch) in row.chars().enumerate() {
                match ch {
                    '0' => {}
                    '1' => m.set(x, y),
                    other => {
                        return Err(Error::Parse {
                            line: line_no,
                            msg: format!("unexpected character {other:?}"),
                        })
                    }
                }
            }
        }
        if let Some((line, _)) = lines.next() {
            return Err(Error::Parse {
                line,
                msg: "trailing content".into(),
            });
        }
        Ok(m)
    }

    /// Renders the fixture text format accepted by [`BoolMatrix::parse_text`].
    pub fn to_text(&self) -> String {
        let mut s = format!("{}\n", self.n);
        for x in 0..self.n {
            for y in 0..self.n {
                s.push(if self.get(x, y) { '1' } else { '0' });
            }
            s.push('\n');
        }
        s
    }
}

impl fmt::Debug for BoolMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BoolMatrix({})", self.n)?;
        for x in 0..self.n {
            for y in 0..self.n {
                f.write_str(if self.get(x, y) { "1" } else { "." })?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Iterator over the set bit positions of a packed word slice.
pub struct BitIter<'a> {
    words: &'a [u64],
    index: usize,
    current: u64,
}

impl<'a> BitIter<'a> {
    /// Iterates over the set bits of `words`, lowest position first.
    pub fn new(words: &'a [u64]) -> Self {
        Self {
            words,
            index: 0,
            current: words.first().copied().unwrap_or(0),
        }
    }
}

impl Iterator for BitIter<'_> {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        loop {
            if self.current != 0 {
                let bit = self.current.trailing_zeros() as usize;
                self.current &= self.current - 1;
                return Some(self.index * 64 + bit);
            }
            self.index += 1;
            if self.index >= self.words.len() {
                return None;
            }
            self.current = self.words[self.index];
        }
    }
}

/// Boolean product `x · y`.
pub fn bool_mul(x: &BoolMatrix, y: &BoolMatrix) -> Result<BoolMatrix> {
    x.mul(y)
}

/// Entrywise OR of `x` and `y`.
pub fn bool_add(x: &BoolMatrix, y: &BoolMatrix) -> Result<BoolMatrix> {
    x.add(y)
}

/// `x` with the entries of `delta` cleared; `delta` must be contained in `x`.
pub fn bool_sub(x: &BoolMatrix, delta: &BoolMatrix) -> Result<BoolMatrix> {
    x.sub(delta)
}

/// Row `i` of `x`, zero elsewhere.
pub fn row_slab(x: &BoolMatrix, i: usize) -> Result<BoolMatrix> {
    x.row_slab(i)
}

/// Column `i` of `x`, zero elsewhere.
pub fn col_slab(x: &BoolMatrix, i: usize) -> Result<BoolMatrix> {
    x.col_slab(i)
}

/// Reflexive-transitive closure by Floyd-Warshall iteration over bit rows.
pub fn closure_oracle(x: &BoolMatrix) -> BoolMatrix {
    let n = x.n();
    let mut c = x.clone();
    for i in 0..n {
        c.set(i, i);
    }
    let words = c.words;
    for k in 0..n {
        let pivot: Vec<u64> = c.row(k).to_vec();
        for i in 0..n {
            if i != k && c.get(i, k) {
                let row = &mut c.data[i * words..(i + 1) * words];
                for w in 0..words {
                    row[w] |= pivot[w];
                }
            }
        }
    }
    c
}

fn pad_pow2(x: &BoolMatrix) -> BoolMatrix {
    x.padded(x.n().next_power_of_two())
}

fn mul(a: &BoolMatrix, b: &BoolMatrix) -> BoolMatrix {
    a.mul(b).expect("block dimensions agree")
}

fn or(a: &BoolMatrix, b: &BoolMatrix) -> BoolMatrix {
    a.add(b).expect("block dimensions agree")
}

fn split(x: &BoolMatrix) -> (BoolMatrix, BoolMatrix, BoolMatrix, BoolMatrix) {
    let m = x.n() / 2;
    (
        x.block(0, 0, m),
        x.block(0, m, m),
        x.block(m, 0, m),
        x.block(m, m, m),
    )
}

fn munro_f_rec(x: &BoolMatrix) -> BoolMatrix {
    if x.n() == 1 {
        return BoolMatrix::identity(1);
    }
    let (a, b, c, d) = split(x);
    let ds = munro_f_rec(&d);
    let e = munro_f_rec(&or(&a, &mul(&mul(&b, &ds), &c)));
    let f = mul(&mul(&e, &b), &ds);
    let g = mul(&mul(&ds, &c), &e);
    let h = or(&ds, &mul(&mul(&g, &b), &ds));
    BoolMatrix::from_blocks(&e, &f, &g, &h)
}

fn munro_h_rec(x: &BoolMatrix) -> BoolMatrix {
    if x.n() == 1 {
        return BoolMatrix::identity(1);
    }
    let (a, b, c, d) = split(x);
    let p = munro_h_rec(&d);
    let p2 = mul(&p, &p);
    let e1 = munro_h_rec(&or(&a, &mul(&mul(&b, &p2), &c)));
    let e1sq = mul(&e1, &e1);
    let h2 = munro_h_rec(&or(&d, &mul(&mul(&c, &e1sq), &b)));
    let h2sq = mul(&h2, &h2);
    let f1 = mul(&mul(&e1sq, &b), &p);
    let g1 = mul(&mul(&p, &c), &e1sq);
    let h1 = mul(&mul(&g1, &b), &p);
    let e2 = mul(&mul(&mul(&mul(&e1, &b), &h2sq), &c), &e1);
    let f2 = mul(&mul(&e1, &b), &h2sq);
    let g2 = mul(&mul(&h2sq, &c), &e1);
    BoolMatrix::from_blocks(&or(&e1, &e2), &or(&f1, &f2), &or(&g1, &g2), &or(&h1, &h2))
}

/// Kleene closure through the recursive block equations
/// `E = (A + B D* C)*`, `F = E B D*`, `G = D* C E`, `H = D* + D* C E B D*`.
///
/// Inputs whose dimension is not a power of two are padded with isolated
/// vertices; the result is truncated back to the input dimension.
pub fn closure_munro(x: &BoolMatrix) -> BoolMatrix {
    munro_f_rec(&pad_pow2(x)).truncated(x.n())
}

/// Kleene closure through the two-branch block equations used by the
/// divide-and-conquer structure: `P = D*`, `E1 = (A + B P^2 C)*`,
/// `H2 = (D + C E1^2 B)*`, with every block of the result obtained as the
/// union of a first-branch and a second-branch product.
pub fn closure_munro_h(x: &BoolMatrix) -> BoolMatrix {
    munro_h_rec(&pad_pow2(x)).truncated(x.n())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(n: usize, e: &[(usize, usize)]) -> BoolMatrix {
        BoolMatrix::from_entries(n, e.iter().copied()).unwrap()
    }

    #[test]
    fn product_of_two_edges() {
        let p = bool_mul(&m(3, &[(0, 1)]), &m(3, &[(1, 2)])).unwrap();
        assert_eq!(p, m(3, &[(0, 2)]));
    }

    #[test]
    fn identity_and_zero_products() {
        let y = m(5, &[(0, 4), (3, 1), (2, 2)]);
        assert_eq!(BoolMatrix::identity(5).mul(&y).unwrap(), y);
        assert!(BoolMatrix::new(5).mul(&y).unwrap().is_zero());
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let err = BoolMatrix::new(3).mul(&BoolMatrix::new(4)).unwrap_err();
        assert_eq!(
            err,
            Error::DimensionMismatch {
                expected: 3,
                got: 4
            }
        );
    }

    #[test]
    fn sub_requires_subset() {
        let x = m(3, &[(0, 1), (1, 2)]);
        assert_eq!(x.sub(&m(3, &[(1, 2)])).unwrap(), m(3, &[(0, 1)]));
        assert_eq!(x.sub(&x).unwrap(), BoolMatrix::new(3));
        assert_eq!(
            x.sub(&m(3, &[(2, 2)])).unwrap_err(),
            Error::NotSubset { row: 2, col: 2 }
        );
    }

    #[test]
    fn slabs() {
        let id = BoolMatrix::identity(4);
        assert_eq!(row_slab(&id, 0).unwrap(), m(4, &[(0, 0)]));
        assert!(col_slab(&BoolMatrix::new(4), 2).unwrap().is_zero());
        let cross = BoolMatrix::ones(3).cross_slab(1).unwrap();
        assert_eq!(cross.count_ones(), 5);
        assert!(row_slab(&id, 4).is_err());
    }

    #[test]
    fn ones_clears_tail_bits() {
        let o = BoolMatrix::ones(70);
        assert_eq!(o.count_ones(), 70 * 70);
        assert_eq!(o.transpose(), o);
    }

    #[test]
    fn closure_basics() {
        assert_eq!(closure_oracle(&BoolMatrix::new(4)), BoolMatrix::identity(4));
        let path = m(3, &[(0, 1), (1, 2)]);
        let expect = m(3, &[(0, 0), (1, 1), (2, 2), (0, 1), (1, 2), (0, 2)]);
        assert_eq!(closure_oracle(&path), expect);
        assert_eq!(closure_munro(&path), expect);
        assert_eq!(closure_munro_h(&path), expect);
        assert_eq!(closure_oracle(&BoolMatrix::ones(5)), BoolMatrix::ones(5));
    }

    #[test]
    fn closure_of_lower_right_block_only() {
        let x = m(4, &[(2, 3)]);
        let c = closure_munro(&x);
        assert_eq!(c.block(0, 0, 2), BoolMatrix::identity(2));
        assert!(c.block(0, 2, 2).is_zero());
        assert!(c.block(2, 0, 2).is_zero());
        assert_eq!(c.block(2, 2, 2), m(2, &[(0, 0), (0, 1), (1, 1)]));
    }

    #[test]
    fn text_round_trip() {
        let x = m(3, &[(0, 1), (2, 0)]);
        let t = x.to_text();
        assert_eq!(t, "3\n010\n000\n100\n");
        assert_eq!(BoolMatrix::parse_text(&t).unwrap(), x);
        assert!(BoolMatrix::parse_text("2\n01\n2x\n").is_err());
        assert!(BoolMatrix::parse_text("2\n01\n").is_err());
    }
}
