//! Bit-packed linear algebra over GF(2).
//!
//! Everything else in the crate sits on these types: boundary operators,
//! parity-check matrices, cycles and the Gray-code search vectors are all
//! [`BitMatrix`] rows or [`BitVec`]s.

mod basis;
mod bitvec;
mod matrix;

pub use basis::Basis;
pub(crate) use bitvec::words_for;
pub use bitvec::{lex_cmp_words, BitVec};
pub use matrix::{BitMatrix, Echelon};

use rand::Rng;

use crate::error::Result;

pub fn rank(m: &BitMatrix) -> usize {
    m.rank()
}

/// Basis of the right null space `{v : m·v = 0}`.
pub fn kernel_basis(m: &BitMatrix) -> Basis {
    let ech = m.echelon();
    let n = m.cols();
    let mut is_pivot = vec![false; n];
    for &p in &ech.pivots {
        is_pivot[p] = true;
    }
    let vectors: Vec<BitVec> = (0..n)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut v = BitVec::unit(n, f);
            for (i, &p) in ech.pivots.iter().enumerate() {
                if ech.reduced.get(i, f) {
                    v.set(p, true);
                }
            }
            v
        })
        .collect();
    Basis::span_of(n, &vectors)
}

/// Basis of the column space of `m`.
pub fn image_basis(m: &BitMatrix) -> Basis {
    Basis::row_space(&m.transpose())
}

pub fn in_span(v: &BitVec, basis: &Basis) -> Result<bool> {
    basis.contains(v)
}

pub fn random_invertible<R: Rng + ?Sized>(m: usize, rng: &mut R) -> BitMatrix {
    BitMatrix::random_invertible(m, rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::collections::HashMap;

    fn canonical_11() -> BitMatrix {
        BitMatrix::from_strs(&["000", "001", "000"])
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(kernel_basis(&BitMatrix::identity(2)).dim(), 0);
        assert_eq!(kernel_basis(&BitMatrix::zeros(2, 2)).dim(), 2);
        let k = kernel_basis(&canonical_11());
        let expected = Basis::span_of(3, &[BitVec::unit(3, 0), BitVec::unit(3, 1)]);
        assert!(k.same_span(&expected));
        assert_eq!(k.vectors(), expected.vectors());
    }

    #[test]
    fn image_examples() {
        assert_eq!(image_basis(&BitMatrix::zeros(4, 4)).dim(), 0);
        assert_eq!(image_basis(&BitMatrix::identity(3)).dim(), 3);
        assert_eq!(image_basis(&canonical_11()).vectors(), vec![BitVec::unit(3, 1)]);
    }

    #[test]
    fn span_membership() {
        let steane = BitMatrix::from_strs(&["100", "010", "001", "011", "101", "110", "111"]);
        let b = Basis::span_of(7, &[steane.col(0), steane.col(1), steane.col(2)]);
        assert!(in_span(&BitVec::zeros(7), &b).unwrap());
        let mut s = steane.col(0);
        s.xor_assign(&steane.col(1));
        assert!(in_span(&s, &b).unwrap());
        let e2 = Basis::span_of(2, &[BitVec::unit(2, 1)]);
        assert!(!in_span(&BitVec::unit(2, 0), &e2).unwrap());
        assert!(matches!(
            in_span(&BitVec::zeros(3), &e2),
            Err(Error::Dimension { expected: 2, found: 3 })
        ));
    }

    #[test]
    fn gl2_uniformity() {
        // Oracle: brute force over all 16 2x2 matrices finds exactly 6 invertible ones.
        let invertible: Vec<BitMatrix> = (0u32..16)
            .map(|bits| BitMatrix::from_fn(2, 2, |r, c| (bits >> (2 * r + c)) & 1 == 1))
            .filter(|m| m.rank() == 2)
            .collect();
        assert_eq!(invertible.len(), 6);

        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let mut counts: HashMap<BitMatrix, usize> = HashMap::new();
        let samples = 600;
        for _ in 0..samples {
            *counts.entry(random_invertible(2, &mut rng)).or_default() += 1;
        }
        assert_eq!(counts.len(), 6);
        let p = 1.0 / 6.0;
        let sigma = (samples as f64 * p * (1.0 - p)).sqrt();
        for m in &invertible {
            let c = counts[m] as f64;
            assert!((c - samples as f64 * p).abs() < 5.0 * sigma, "count {c} for {m:?}");
        }
    }

    #[test]
    fn random_invertible_is_seed_deterministic() {
        let a = random_invertible(12, &mut ChaCha8Rng::seed_from_u64(9));
        let b = random_invertible(12, &mut ChaCha8Rng::seed_from_u64(9));
        assert_eq!(a, b);
        assert_eq!(a.rank(), 12);
    }

    #[test]
    fn complement_in_extends_to_full_span() {
        let big = Basis::span_of(4, &[BitVec::unit(4, 0), BitVec::unit(4, 1), BitVec::unit(4, 2)]);
        let small = Basis::span_of(4, &[BitVec::from_bit_str("1100")]);
        let extra = small.complement_in(&big);
        assert_eq!(extra.len(), 2);
        let mut all = small.vectors();
        all.extend(extra);
        assert!(Basis::span_of(4, &all).same_span(&big));
    }
}
