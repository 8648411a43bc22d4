use std::fmt;

use super::field::Gf4;
use crate::error::{Error, Result};
use crate::gf2::BitVec;

/// A GF(4) vector stored as two bit planes.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Gf4Vec {
    lo: BitVec,
    hi: BitVec,
}

/// `(lo, hi) ↦ c · (lo, hi)` applied word-wise.
#[inline]
pub(crate) fn scale_words(c: Gf4, lo: u64, hi: u64) -> (u64, u64) {
    match c.code() {
        0 => (0, 0),
        1 => (lo, hi),
        2 => (hi, lo ^ hi),
        _ => (lo ^ hi, lo),
    }
}

impl Gf4Vec {
    pub fn zeros(len: usize) -> Self {
        Gf4Vec {
            lo: BitVec::zeros(len),
            hi: BitVec::zeros(len),
        }
    }

    pub fn from_elems(elems: &[Gf4]) -> Self {
        let mut v = Gf4Vec::zeros(elems.len());
        for (i, &e) in elems.iter().enumerate() {
            v.set(i, e);
        }
        v
    }

    pub fn from_planes(lo: BitVec, hi: BitVec) -> Self {
        assert_eq!(lo.len(), hi.len());
        Gf4Vec { lo, hi }
    }

    /// Parses a string over the alphabet `{0, 1, w, W}`.
    pub fn parse(s: &str) -> Option<Self> {
        let elems: Option<Vec<Gf4>> = s.chars().map(Gf4::from_char).collect();
        elems.map(|e| Gf4Vec::from_elems(&e))
    }

    pub fn len(&self) -> usize {
        self.lo.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lo.is_empty()
    }

    pub fn lo(&self) -> &BitVec {
        &self.lo
    }

    pub fn hi(&self) -> &BitVec {
        &self.hi
    }

    pub fn get(&self, i: usize) -> Gf4 {
        Gf4::from_planes(self.lo.get(i), self.hi.get(i))
    }

    pub fn set(&mut self, i: usize, value: Gf4) {
        self.lo.set(i, value.lo());
        self.hi.set(i, value.hi());
    }

    pub fn elems(&self) -> Vec<Gf4> {
        (0..self.len()).map(|i| self.get(i)).collect()
    }

    /// Number of nonzero components.
    pub fn weight(&self) -> usize {
        self.lo
            .words()
            .iter()
            .zip(self.hi.words())
            .map(|(a, b)| (a | b).count_ones() as usize)
            .sum()
    }

    pub fn is_zero(&self) -> bool {
        self.lo.is_zero() && self.hi.is_zero()
    }

    pub fn add_assign(&mut self, other: &Gf4Vec) {
        self.lo.xor_assign(&other.lo);
        self.hi.xor_assign(&other.hi);
    }

    /// `self += c · other`.
    pub fn add_scaled(&mut self, c: Gf4, other: &Gf4Vec) {
        assert_eq!(self.len(), other.len());
        let lo = self.lo.words_mut();
        for (i, (a, b)) in other.lo.words().iter().zip(other.hi.words()).enumerate() {
            lo[i] ^= scale_words(c, *a, *b).0;
        }
        let hi = self.hi.words_mut();
        for (i, (a, b)) in other.lo.words().iter().zip(other.hi.words()).enumerate() {
            hi[i] ^= scale_words(c, *a, *b).1;
        }
    }

    pub fn scaled(&self, c: Gf4) -> Gf4Vec {
        let mut out = Gf4Vec::zeros(self.len());
        out.add_scaled(c, self);
        out
    }

    pub fn conj(&self) -> Gf4Vec {
        let mut lo = self.lo.clone();
        lo.xor_assign(&self.hi);
        Gf4Vec {
            lo,
            hi: self.hi.clone(),
        }
    }

    /// `v ⊗ w` with index `i · w.len() + j`.
    pub fn kron(&self, other: &Gf4Vec) -> Gf4Vec {
        let mut out = Gf4Vec::zeros(self.len() * other.len());
        for i in 0..self.len() {
            let a = self.get(i);
            if a.is_zero() {
                continue;
            }
            for j in 0..other.len() {
                out.set(i * other.len() + j, a * other.get(j));
            }
        }
        out
    }

    /// Concatenated planes `[lo words…, hi words…]`.
    pub fn planar_words(&self) -> Vec<u64> {
        let mut w = self.lo.words().to_vec();
        w.extend_from_slice(self.hi.words());
        w
    }

    pub fn from_planar_words(len: usize, words: &[u64]) -> Self {
        let half = words.len() / 2;
        Gf4Vec {
            lo: BitVec::from_words(len, words[..half].to_vec()),
            hi: BitVec::from_words(len, words[half..].to_vec()),
        }
    }
}

/// Hermitian form `Σ f̄_j g_j`.
pub fn hermitian_inner(f: &Gf4Vec, g: &Gf4Vec) -> Result<Gf4> {
    if f.len() != g.len() {
        return Err(Error::Dimension {
            expected: f.len(),
            found: g.len(),
        });
    }
    Ok((0..f.len()).fold(Gf4::ZERO, |acc, j| acc + f.get(j).conj() * g.get(j)))
}

/// Whether the Hermitian form vanishes on every pair of basis vectors, including each with itself.
pub fn is_self_orthogonal(basis: &[Gf4Vec]) -> bool {
    basis.iter().enumerate().all(|(i, f)| {
        basis[i..]
            .iter()
            .all(|g| matches!(hermitian_inner(f, g), Ok(x) if x.is_zero()))
    })
}

impl fmt::Display for Gf4Vec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len() {
            write!(f, "{}", self.get(i).to_char())?;
        }
        Ok(())
    }
}

impl fmt::Debug for Gf4Vec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Gf4Vec({self})")
    }
}
