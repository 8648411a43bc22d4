use super::{BitMatrix, BitVec};
use crate::error::{Error, Result};

/// A linearly independent set of vectors, kept in reduced row echelon form so
/// that two bases of the same subspace compare equal.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Basis {
    ambient_dim: usize,
    vectors: BitMatrix,
    pivots: Vec<usize>,
}

impl Basis {
    pub fn empty(ambient_dim: usize) -> Self {
        Basis {
            ambient_dim,
            vectors: BitMatrix::zeros(0, ambient_dim),
            pivots: Vec::new(),
        }
    }

    /// Echelon basis of the span of the rows of `m`.
    pub fn row_space(m: &BitMatrix) -> Self {
        let ech = m.echelon();
        let rank = ech.rank();
        Basis {
            ambient_dim: m.cols(),
            vectors: ech.reduced.submatrix(0..rank, 0..m.cols()),
            pivots: ech.pivots,
        }
    }

    pub fn span_of(ambient_dim: usize, vectors: &[BitVec]) -> Self {
        Self::row_space(&BitMatrix::from_rows(ambient_dim, vectors))
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.vectors.rows()
    }

    #[inline]
    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn as_matrix(&self) -> &BitMatrix {
        &self.vectors
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn vector(&self, i: usize) -> BitVec {
        self.vectors.row(i)
    }

    pub fn vectors(&self) -> Vec<BitVec> {
        self.vectors.row_vecs()
    }

    /// Clears every pivot coordinate of `v` using the basis rows. The result is
    /// zero iff `v` lies in the span.
    pub fn reduce(&self, v: &BitVec) -> BitVec {
        let mut out = v.clone();
        for (i, &p) in self.pivots.iter().enumerate() {
            if out.get(p) {
                let words = self.vectors.row_words(i);
                for (x, y) in out.words_mut().iter_mut().zip(words) {
                    *x ^= y;
                }
            }
        }
        out
    }

    pub fn contains(&self, v: &BitVec) -> Result<bool> {
        if v.len() != self.ambient_dim {
            return Err(Error::Dimension {
                expected: self.ambient_dim,
                found: v.len(),
            });
        }
        Ok(self.reduce(v).is_zero())
    }

    /// True iff the two bases span the same subspace.
    pub fn same_span(&self, other: &Basis) -> bool {
        self.ambient_dim == other.ambient_dim && self.vectors == other.vectors
    }

    /// True iff `self` is a subspace of `other`.
    pub fn is_subspace_of(&self, other: &Basis) -> bool {
        self.ambient_dim == other.ambient_dim && (0..self.dim()).all(|i| other.reduce(&self.vector(i)).is_zero())
    }

    /// Greedy completion of `self` inside `larger`: the returned vectors are the
    /// members of `larger`'s basis (in order) that are independent modulo `self`.
    pub fn complement_in(&self, larger: &Basis) -> Vec<BitVec> {
        let mut acc = self.vectors.clone();
        let mut current = self.clone();
        let mut out = Vec::new();
        for v in larger.vectors() {
            if !current.reduce(&v).is_zero() {
                acc.push_row(&v);
                current = Basis::row_space(&acc);
                out.push(v);
            }
        }
        out
    }
}
