use std::fmt;

use rand::Rng;

use super::bitvec::{tail_mask, words_for, BitVec, WORD_BITS};
use crate::error::{Error, Result};

/// Dense row-major bit-packed matrix over GF(2).
///
/// Each row occupies `stride` words; bits past `cols` in a row are always zero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

/// Result of reducing a matrix to reduced row echelon form.
#[derive(Debug, Clone)]
pub struct Echelon {
    /// The reduced matrix (same shape as the input).
    pub reduced: BitMatrix,
    /// Pivot column of each of the first `pivots.len()` rows.
    pub pivots: Vec<usize>,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = words_for(cols);
        BitMatrix {
            rows,
            cols,
            stride,
            data: vec![0; rows * stride],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut m = Self::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                if f(r, c) {
                    m.set(r, c, true);
                }
            }
        }
        m
    }

    /// Stacks equal-length vectors as rows. `cols` is needed when `rows` is empty.
    pub fn from_rows(cols: usize, rows: &[BitVec]) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "row {i} has wrong length");
            m.row_words_mut(i).copy_from_slice(r.words());
        }
        m
    }

    /// Places vectors as columns.
    pub fn from_cols(rows: usize, cols: &[BitVec]) -> Self {
        Self::from_rows(rows, cols).transpose()
    }

    /// Parses rows of `0`/`1` characters; panics on malformed input (test helper).
    pub fn from_strs(rows: &[&str]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let vecs: Vec<BitVec> = rows.iter().map(|r| BitVec::from_bit_str(r)).collect();
        Self::from_rows(cols, &vecs)
    }

    pub fn random<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> Self {
        let mut m = Self::zeros(rows, cols);
        let mask = tail_mask(cols);
        for r in 0..rows {
            let row = m.row_words_mut(r);
            for w in row.iter_mut() {
                *w = rng.gen();
            }
            if let Some(last) = row.last_mut() {
                *last &= mask;
            }
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        assert!(r < self.rows && c < self.cols, "index ({r},{c}) out of range");
        (self.data[r * self.stride + c / WORD_BITS] >> (c % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        assert!(r < self.rows && c < self.cols, "index ({r},{c}) out of range");
        let w = &mut self.data[r * self.stride + c / WORD_BITS];
        let mask = 1u64 << (c % WORD_BITS);
        if value {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, r: usize, c: usize) {
        assert!(r < self.rows && c < self.cols, "index ({r},{c}) out of range");
        self.data[r * self.stride + c / WORD_BITS] ^= 1u64 << (c % WORD_BITS);
    }

    #[inline]
    pub fn row_words(&self, r: usize) -> &[u64] {
        &self.data[r * self.stride..(r + 1) * self.stride]
    }

    #[inline]
    pub(crate) fn row_words_mut(&mut self, r: usize) -> &mut [u64] {
        &mut self.data[r * self.stride..(r + 1) * self.stride]
    }

    pub fn row(&self, r: usize) -> BitVec {
        BitVec::from_words(self.cols, self.row_words(r).to_vec())
    }

    pub fn col(&self, c: usize) -> BitVec {
        BitVec::from_bools(&(0..self.rows).map(|r| self.get(r, c)).collect::<Vec<_>>())
    }

    pub fn row_vecs(&self) -> Vec<BitVec> {
        (0..self.rows).map(|r| self.row(r)).collect()
    }

    /// `row[dst] ^= row[src]`.
    pub fn add_row(&mut self, dst: usize, src: usize) {
        assert_ne!(dst, src);
        let s = self.stride;
        let (a, b) = if dst < src {
            let (lo, hi) = self.data.split_at_mut(src * s);
            (&mut lo[dst * s..dst * s + s], &hi[..s])
        } else {
            let (lo, hi) = self.data.split_at_mut(dst * s);
            (&mut hi[..s], &lo[src * s..src * s + s])
        };
        for (x, y) in a.iter_mut().zip(b) {
            *x ^= y;
        }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for k in 0..self.stride {
            self.data.swap(a * self.stride + k, b * self.stride + k);
        }
    }

    pub fn xor_row_with(&mut self, r: usize, v: &BitVec) {
        assert_eq!(v.len(), self.cols);
        for (x, y) in self.row_words_mut(r).iter_mut().zip(v.words()) {
            *x ^= y;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&w| w == 0)
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in self.row_ones(r) {
                t.set(c, r, true);
            }
        }
        t
    }

    pub fn row_ones(&self, r: usize) -> impl Iterator<Item = usize> + '_ {
        self.row_words(r).iter().enumerate().flat_map(|(wi, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    None
                } else {
                    let b = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    Some(wi * WORD_BITS + b)
                }
            })
        })
    }

    pub fn row_weight(&self, r: usize) -> usize {
        self.row_words(r).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn col_weights(&self) -> Vec<usize> {
        let mut out = vec![0; self.cols];
        for r in 0..self.rows {
            for c in self.row_ones(r) {
                out[c] += 1;
            }
        }
        out
    }

    /// Largest weight over every row and every column.
    pub fn max_row_col_weight(&self) -> usize {
        let rows = (0..self.rows).map(|r| self.row_weight(r)).max().unwrap_or(0);
        let cols = self.col_weights().into_iter().max().unwrap_or(0);
        rows.max(cols)
    }

    pub fn mul(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!(self.cols, other.rows, "shape mismatch in product");
        let mut out = BitMatrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in self.row_ones(r) {
                let (src_start, dst_start) = (k * other.stride, r * out.stride);
                for w in 0..other.stride {
                    out.data[dst_start + w] ^= other.data[src_start + w];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &BitVec) -> BitVec {
        assert_eq!(self.cols, v.len(), "shape mismatch in matrix-vector product");
        let mut out = BitVec::zeros(self.rows);
        for r in 0..self.rows {
            let ones: u32 = self
                .row_words(r)
                .iter()
                .zip(v.words())
                .map(|(a, b)| (a & b).count_ones())
                .sum();
            if ones & 1 == 1 {
                out.set(r, true);
            }
        }
        out
    }

    pub fn add(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a ^= b;
        }
        out
    }

    /// Kronecker product with row-major index `i * other.rows + j`.
    pub fn kron(&self, other: &BitMatrix) -> BitMatrix {
        let mut out = BitMatrix::zeros(self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for k in self.row_ones(i) {
                for j in 0..other.rows {
                    for l in other.row_ones(j) {
                        out.set(i * other.rows + j, k * other.cols + l, true);
                    }
                }
            }
        }
        out
    }

    pub fn submatrix(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> BitMatrix {
        let mut out = BitMatrix::zeros(rows.len(), cols.len());
        for (ri, r) in rows.clone().enumerate() {
            for c in self.row_ones(r) {
                if cols.contains(&c) {
                    out.set(ri, c - cols.start, true);
                }
            }
        }
        out
    }

    /// `[self | other]`.
    pub fn hstack(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!(self.rows, other.rows);
        let mut out = BitMatrix::zeros(self.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in self.row_ones(r) {
                out.set(r, c, true);
            }
            for c in other.row_ones(r) {
                out.set(r, self.cols + c, true);
            }
        }
        out
    }

    pub fn vstack(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!(self.cols, other.cols);
        let mut out = BitMatrix::zeros(self.rows + other.rows, self.cols);
        out.data[..self.data.len()].copy_from_slice(&self.data);
        out.data[self.data.len()..].copy_from_slice(&other.data);
        out
    }

    /// Appends a zero column.
    pub fn with_extra_col(&self) -> BitMatrix {
        let mut out = BitMatrix::zeros(self.rows, self.cols + 1);
        for r in 0..self.rows {
            let s = self.stride;
            out.row_words_mut(r)[..s].copy_from_slice(self.row_words(r));
        }
        out
    }

    pub fn push_row(&mut self, v: &BitVec) {
        assert_eq!(v.len(), self.cols);
        self.data.extend_from_slice(v.words());
        self.rows += 1;
    }

    pub fn remove_row(&mut self, r: usize) {
        assert!(r < self.rows);
        self.data.drain(r * self.stride..(r + 1) * self.stride);
        self.rows -= 1;
    }

    /// Reduced row echelon form: pivots scan columns left to right, the topmost
    /// remaining row with a one becomes the pivot row.
    pub fn echelon(&self) -> Echelon {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut next = 0;
        for c in 0..self.cols {
            if next == m.rows {
                break;
            }
            let (w, mask) = (c / WORD_BITS, 1u64 << (c % WORD_BITS));
            let Some(p) = (next..m.rows).find(|&r| m.data[r * m.stride + w] & mask != 0) else {
                continue;
            };
            m.swap_rows(next, p);
            for r in 0..m.rows {
                if r != next && m.data[r * m.stride + w] & mask != 0 {
                    let (s, pr) = (m.stride, next);
                    for k in w..s {
                        let src = m.data[pr * s + k];
                        m.data[r * s + k] ^= src;
                    }
                }
            }
            pivots.push(c);
            next += 1;
        }
        Echelon { reduced: m, pivots }
    }

    /// GF(2) rank by forward elimination; the input is not modified.
    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        let mut rank = 0;
        for c in 0..self.cols {
            if rank == m.rows {
                break;
            }
            let (w, mask) = (c / WORD_BITS, 1u64 << (c % WORD_BITS));
            let Some(p) = (rank..m.rows).find(|&r| m.data[r * m.stride + w] & mask != 0) else {
                continue;
            };
            m.swap_rows(rank, p);
            for r in rank + 1..m.rows {
                if m.data[r * m.stride + w] & mask != 0 {
                    let s = m.stride;
                    for k in w..s {
                        let src = m.data[rank * s + k];
                        m.data[r * s + k] ^= src;
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    pub fn inverse(&self) -> Result<BitMatrix> {
        if !self.is_square() {
            return Err(Error::Dimension {
                expected: self.rows,
                found: self.cols,
            });
        }
        let n = self.rows;
        let ech = self.hstack(&BitMatrix::identity(n)).echelon();
        if ech.pivots.len() < n || ech.pivots[n - 1] >= n {
            return Err(Error::Precondition("matrix is singular".into()));
        }
        Ok(ech.reduced.submatrix(0..n, n..2 * n))
    }

    /// Some `x` with `self · x = b`, or `None` when `b` is outside the column space.
    pub fn solve(&self, b: &BitVec) -> Option<BitVec> {
        assert_eq!(b.len(), self.rows);
        let aug = self.hstack(&BitMatrix::from_cols(self.rows, std::slice::from_ref(b)));
        let ech = aug.echelon();
        if ech.pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = BitVec::zeros(self.cols);
        for (i, &p) in ech.pivots.iter().enumerate() {
            if ech.reduced.get(i, self.cols) {
                x.set(p, true);
            }
        }
        Some(x)
    }

    /// Uniformly random full-rank square matrix by rejection sampling.
    pub fn random_invertible<R: Rng + ?Sized>(n: usize, rng: &mut R) -> BitMatrix {
        assert!(n >= 1, "random_invertible needs n >= 1");
        loop {
            let m = BitMatrix::random(n, n, rng);
            if m.rank() == n {
                return m;
            }
        }
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && *self == self.transpose()
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "  {}", self.row(r))?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Steane parity-check matrix: columns are the three basis checks.
    fn steane() -> BitMatrix {
        BitMatrix::from_strs(&["100", "010", "001", "011", "101", "110", "111"])
    }

    #[test]
    fn rank_examples() {
        assert_eq!(BitMatrix::zeros(3, 3).rank(), 0);
        assert_eq!(BitMatrix::identity(3).rank(), 3);
        assert_eq!(steane().rank(), 3);
    }

    #[test]
    fn rank_does_not_modify_input() {
        let m = steane();
        let before = m.clone();
        let _ = m.rank();
        assert_eq!(m, before);
    }

    #[test]
    fn transpose_involution_and_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = BitMatrix::random(5, 70, &mut rng);
        let b = BitMatrix::random(70, 9, &mut rng);
        assert_eq!(a.transpose().transpose(), a);
        assert_eq!(a.mul(&b).transpose(), b.transpose().mul(&a.transpose()));
    }

    #[test]
    fn inverse_and_solve() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let u = BitMatrix::random_invertible(9, &mut rng);
        let inv = u.inverse().unwrap();
        assert_eq!(u.mul(&inv), BitMatrix::identity(9));
        let b = BitVec::from_bit_str("101100111");
        let x = u.solve(&b).unwrap();
        assert_eq!(u.mul_vec(&x), b);
        assert!(BitMatrix::zeros(2, 2).inverse().is_err());
        assert!(BitMatrix::zeros(2, 2).solve(&BitVec::from_bit_str("10")).is_none());
    }

    #[test]
    fn random_invertible_one_by_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert_eq!(BitMatrix::random_invertible(1, &mut rng), BitMatrix::identity(1));
    }

    #[test]
    fn random_rows_keep_padding_clear() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let m = BitMatrix::random(4, 67, &mut rng);
        for r in 0..4 {
            assert_eq!(m.row_words(r)[1] & !tail_mask(67), 0);
        }
    }

    #[test]
    fn kron_with_identity_structure() {
        let d = BitMatrix::from_strs(&["01", "00"]);
        let k = d.kron(&BitMatrix::identity(2));
        assert_eq!(k, BitMatrix::from_strs(&["0010", "0001", "0000", "0000"]));
    }
}
