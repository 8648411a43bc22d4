use std::fmt;

use super::field::Gf4;
use super::vector::Gf4Vec;
use crate::error::{Error, Result};

/// A dense GF(4) matrix; each row is a planar [`Gf4Vec`], so row operations are word-parallel.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Gf4Matrix {
    cols: usize,
    rows: Vec<Gf4Vec>,
}

/// Reduced row echelon form over GF(4) with pivots scaled to 1.
#[derive(Clone, Debug)]
pub struct Gf4Echelon {
    pub reduced: Gf4Matrix,
    pub pivots: Vec<usize>,
}

impl Gf4Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Gf4Matrix {
            cols,
            rows: vec![Gf4Vec::zeros(cols); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Gf4Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Gf4::ONE);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Gf4) -> Self {
        let mut m = Gf4Matrix::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m.set(r, c, f(r, c));
            }
        }
        m
    }

    pub fn from_rows(cols: usize, rows: Vec<Gf4Vec>) -> Self {
        assert!(rows.iter().all(|r| r.len() == cols));
        Gf4Matrix { cols, rows }
    }

    pub fn from_cols(rows: usize, cols: &[Gf4Vec]) -> Self {
        Gf4Matrix::from_fn(rows, cols.len(), |r, c| cols[c].get(r))
    }

    /// Parses rows over `{0, 1, w, W}`; panics on malformed input.
    pub fn from_strs(rows: &[&str]) -> Self {
        let rows: Vec<Gf4Vec> = rows.iter().map(|s| Gf4Vec::parse(s).expect("GF(4) row")).collect();
        let cols = rows.first().map_or(0, |r| r.len());
        Gf4Matrix::from_rows(cols, rows)
    }

    pub fn rows(&self) -> usize {
        self.rows.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> Gf4 {
        self.rows[r].get(c)
    }

    pub fn set(&mut self, r: usize, c: usize, v: Gf4) {
        self.rows[r].set(c, v);
    }

    pub fn row(&self, r: usize) -> &Gf4Vec {
        &self.rows[r]
    }

    pub fn row_vecs(&self) -> &[Gf4Vec] {
        &self.rows
    }

    pub fn col(&self, c: usize) -> Gf4Vec {
        Gf4Vec::from_elems(&(0..self.rows()).map(|r| self.get(r, c)).collect::<Vec<_>>())
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(Gf4Vec::is_zero)
    }

    pub fn transpose(&self) -> Gf4Matrix {
        Gf4Matrix::from_fn(self.cols, self.rows(), |r, c| self.get(c, r))
    }

    pub fn conj(&self) -> Gf4Matrix {
        Gf4Matrix {
            cols: self.cols,
            rows: self.rows.iter().map(Gf4Vec::conj).collect(),
        }
    }

    /// Conjugate transpose `m* = m̄ᵀ`.
    pub fn adjoint(&self) -> Gf4Matrix {
        self.conj().transpose()
    }

    pub fn is_self_adjoint(&self) -> bool {
        self.is_square() && self.adjoint() == *self
    }

    pub fn add(&self, other: &Gf4Matrix) -> Gf4Matrix {
        assert_eq!((self.rows(), self.cols), (other.rows(), other.cols));
        let mut out = self.clone();
        for (a, b) in out.rows.iter_mut().zip(&other.rows) {
            a.add_assign(b);
        }
        out
    }

    pub fn mul(&self, other: &Gf4Matrix) -> Gf4Matrix {
        assert_eq!(self.cols, other.rows(), "inner dimensions differ");
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let mut acc = Gf4Vec::zeros(other.cols);
                for k in 0..self.cols {
                    let a = row.get(k);
                    if !a.is_zero() {
                        acc.add_scaled(a, &other.rows[k]);
                    }
                }
                acc
            })
            .collect();
        Gf4Matrix { cols: other.cols, rows }
    }

    pub fn mul_vec(&self, v: &Gf4Vec) -> Gf4Vec {
        assert_eq!(self.cols, v.len());
        let out: Vec<Gf4> = self
            .rows
            .iter()
            .map(|row| (0..self.cols).fold(Gf4::ZERO, |acc, j| acc + row.get(j) * v.get(j)))
            .collect();
        Gf4Vec::from_elems(&out)
    }

    pub fn scale(&self, c: Gf4) -> Gf4Matrix {
        Gf4Matrix {
            cols: self.cols,
            rows: self.rows.iter().map(|r| r.scaled(c)).collect(),
        }
    }

    /// Kronecker product, row-major.
    pub fn kron(&self, other: &Gf4Matrix) -> Gf4Matrix {
        let (r2, c2) = (other.rows(), other.cols);
        Gf4Matrix::from_fn(self.rows() * r2, self.cols * c2, |r, c| {
            self.get(r / r2, c / c2) * other.get(r % r2, c % c2)
        })
    }

    pub fn row_weight(&self, r: usize) -> usize {
        self.rows[r].weight()
    }

    pub fn col_weights(&self) -> Vec<usize> {
        let mut w = vec![0; self.cols];
        for row in &self.rows {
            for (c, slot) in w.iter_mut().enumerate() {
                if !row.get(c).is_zero() {
                    *slot += 1;
                }
            }
        }
        w
    }

    pub fn max_row_col_weight(&self) -> usize {
        let r = (0..self.rows()).map(|r| self.row_weight(r)).max().unwrap_or(0);
        let c = self.col_weights().into_iter().max().unwrap_or(0);
        r.max(c)
    }

    pub fn echelon(&self) -> Gf4Echelon {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut rank = 0;
        for col in 0..self.cols {
            let Some(p) = (rank..m.rows()).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            m.rows.swap(rank, p);
            let inv = m.get(rank, col).inv().expect("nonzero pivot");
            m.rows[rank] = m.rows[rank].scaled(inv);
            let pivot_row = m.rows[rank].clone();
            for r in 0..m.rows() {
                if r != rank {
                    let c = m.get(r, col);
                    if !c.is_zero() {
                        m.rows[r].add_scaled(c, &pivot_row);
                    }
                }
            }
            pivots.push(col);
            rank += 1;
        }
        Gf4Echelon { reduced: m, pivots }
    }

    pub fn rank(&self) -> usize {
        self.echelon().pivots.len()
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows()
    }

    pub fn inverse(&self) -> Result<Gf4Matrix> {
        if !self.is_square() {
            return Err(Error::Dimension {
                expected: self.rows(),
                found: self.cols,
            });
        }
        let n = self.rows();
        let aug = Gf4Matrix::from_fn(n, 2 * n, |r, c| {
            if c < n {
                self.get(r, c)
            } else if c - n == r {
                Gf4::ONE
            } else {
                Gf4::ZERO
            }
        });
        let ech = aug.echelon();
        if ech.pivots.len() < n || ech.pivots[n - 1] >= n {
            return Err(Error::Precondition("matrix is singular".into()));
        }
        Ok(Gf4Matrix::from_fn(n, n, |r, c| ech.reduced.get(r, n + c)))
    }

    /// Basis of the right null space.
    pub fn kernel_basis(&self) -> Vec<Gf4Vec> {
        let ech = self.echelon();
        let mut is_pivot = vec![false; self.cols];
        for &p in &ech.pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                let mut v = Gf4Vec::zeros(self.cols);
                v.set(f, Gf4::ONE);
                for (i, &p) in ech.pivots.iter().enumerate() {
                    v.set(p, ech.reduced.get(i, f));
                }
                v
            })
            .collect()
    }

    /// Basis of the column space, in reduced echelon form.
    pub fn image_basis(&self) -> Vec<Gf4Vec> {
        row_space(&self.transpose())
    }
}

/// Nonzero rows of the reduced echelon form.
pub fn row_space(m: &Gf4Matrix) -> Vec<Gf4Vec> {
    let ech = m.echelon();
    ech.reduced.rows[..ech.pivots.len()].to_vec()
}

/// A GF(4) subspace held in reduced echelon form.
#[derive(Clone, Debug)]
pub struct Gf4Span {
    len: usize,
    rows: Vec<Gf4Vec>,
    pivots: Vec<usize>,
}

impl Gf4Span {
    pub fn new(len: usize, vectors: &[Gf4Vec]) -> Self {
        let ech = Gf4Matrix::from_rows(len, vectors.to_vec()).echelon();
        let k = ech.pivots.len();
        Gf4Span {
            len,
            rows: ech.reduced.rows[..k].to_vec(),
            pivots: ech.pivots,
        }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn vectors(&self) -> &[Gf4Vec] {
        &self.rows
    }

    pub fn reduce(&self, v: &Gf4Vec) -> Gf4Vec {
        let mut out = v.clone();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let c = out.get(p);
            if !c.is_zero() {
                out.add_scaled(c, row);
            }
        }
        out
    }

    pub fn contains(&self, v: &Gf4Vec) -> bool {
        assert_eq!(v.len(), self.len);
        self.reduce(v).is_zero()
    }

    /// Vectors of `larger` that extend this span to the span of `larger`.
    pub fn complement_in(&self, larger: &[Gf4Vec]) -> Vec<Gf4Vec> {
        let mut acc = self.clone();
        let mut out = Vec::new();
        for v in larger {
            if !acc.contains(v) {
                out.push(v.clone());
                let mut all = acc.rows.clone();
                all.push(v.clone());
                acc = Gf4Span::new(self.len, &all);
            }
        }
        out
    }
}

impl fmt::Debug for Gf4Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Gf4Matrix {}x{}", self.rows(), self.cols)?;
        for r in &self.rows {
            writeln!(f, "  {r}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> Gf4Matrix {
        Gf4Matrix::from_fn(rows, cols, |_, _| Gf4::from_code(rng.gen_range(0..4)))
    }

    #[test]
    fn adjoint_is_involution() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let m = random(4, 6, &mut rng);
            assert_eq!(m.adjoint().adjoint(), m);
            let n = random(6, 3, &mut rng);
            assert_eq!(m.mul(&n).adjoint(), n.adjoint().mul(&m.adjoint()));
        }
    }

    #[test]
    fn inverse_and_kernel() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let mut found = 0;
        for _ in 0..50 {
            let m = random(4, 4, &mut rng);
            if let Ok(inv) = m.inverse() {
                assert_eq!(m.mul(&inv), Gf4Matrix::identity(4));
                found += 1;
            } else {
                assert!(m.rank() < 4);
            }
            let k = m.kernel_basis();
            assert_eq!(k.len() + m.rank(), 4);
            for v in &k {
                assert!(m.mul_vec(v).is_zero());
            }
        }
        assert!(found > 0);
    }

    #[test]
    fn rank_matches_span_size() {
        // Oracle: count distinct F4-combinations of the rows.
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let m = random(3, 4, &mut rng);
            let mut seen = std::collections::HashSet::new();
            for code in 0..64u32 {
                let mut v = Gf4Vec::zeros(4);
                for r in 0..3 {
                    v.add_scaled(Gf4::from_code(((code >> (2 * r)) & 3) as u8), m.row(r));
                }
                seen.insert(v);
            }
            assert_eq!(seen.len(), 4usize.pow(m.rank() as u32));
        }
    }

    #[test]
    fn span_membership() {
        let a = Gf4Vec::parse("1w0").unwrap();
        let s = Gf4Span::new(3, std::slice::from_ref(&a));
        assert!(s.contains(&a.scaled(Gf4::W2)));
        assert!(!s.contains(&Gf4Vec::parse("100").unwrap()));
        let extra = s.complement_in(&[a.scaled(Gf4::W), Gf4Vec::parse("001").unwrap()]);
        assert_eq!(extra.len(), 1);
    }
}
