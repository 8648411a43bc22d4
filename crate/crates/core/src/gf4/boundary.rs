use super::field::Gf4;
use super::matrix::{Gf4Matrix, Gf4Span};
use super::vector::{is_self_orthogonal, Gf4Vec};
use crate::error::{Error, Result};

/// Largest size accepted by [`enumerate_selfadjoint_invertible`].
pub const MAX_SELFADJOINT_ENUM: usize = 3;

/// A self-adjoint GF(4) boundary operator: `δ* = δ` and `δ² = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gf4Boundary {
    delta: Gf4Matrix,
    rank: usize,
}

impl Gf4Boundary {
    pub fn new(delta: Gf4Matrix) -> Result<Self> {
        if !delta.is_square() {
            return Err(Error::Dimension {
                expected: delta.rows(),
                found: delta.cols(),
            });
        }
        if delta.adjoint() != delta {
            return Err(Error::Precondition("operator is not self-adjoint".into()));
        }
        if !delta.mul(&delta).is_zero() {
            return Err(Error::Precondition("operator does not square to zero".into()));
        }
        let rank = delta.rank();
        Ok(Gf4Boundary { delta, rank })
    }

    pub fn zero(n: usize) -> Self {
        Gf4Boundary {
            delta: Gf4Matrix::zeros(n, n),
            rank: 0,
        }
    }

    pub fn matrix(&self) -> &Gf4Matrix {
        &self.delta
    }

    pub fn dim(&self) -> usize {
        self.delta.rows()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// `k = n − 2 · dim im δ`.
    pub fn hom_dim(&self) -> usize {
        self.dim() - 2 * self.rank
    }

    pub fn kernel(&self) -> Vec<Gf4Vec> {
        self.delta.kernel_basis()
    }

    pub fn image(&self) -> Gf4Span {
        Gf4Span::new(self.dim(), &self.delta.image_basis())
    }

    pub fn homology_representatives(&self) -> Vec<Gf4Vec> {
        self.image().complement_in(&self.kernel())
    }

    pub fn weight(&self) -> usize {
        self.delta.max_row_col_weight()
    }
}

/// `δ = A U A*` where the columns of `A` are the given checks.
pub fn gf4_boundary_from_checks(n: usize, basis: &[Gf4Vec], u: &Gf4Matrix) -> Result<Gf4Boundary> {
    let m = basis.len();
    if u.rows() != m || u.cols() != m {
        return Err(Error::Dimension {
            expected: m,
            found: u.rows(),
        });
    }
    if let Some(bad) = basis.iter().find(|a| a.len() != n) {
        return Err(Error::Dimension {
            expected: n,
            found: bad.len(),
        });
    }
    if m == 0 {
        return Ok(Gf4Boundary::zero(n));
    }
    if !is_self_orthogonal(basis) {
        return Err(Error::Precondition("check basis is not self-orthogonal".into()));
    }
    if !u.is_self_adjoint() {
        return Err(Error::Precondition("U is not self-adjoint".into()));
    }
    if !u.is_invertible() {
        return Err(Error::Precondition("U is singular".into()));
    }
    if Gf4Span::new(n, basis).dim() != m {
        return Err(Error::Precondition("check vectors are linearly dependent".into()));
    }
    let a = Gf4Matrix::from_cols(n, basis);
    Gf4Boundary::new(a.mul(u).mul(&a.adjoint()))
}

/// All invertible `m × m` matrices with `u* = u`.
///
/// Self-adjoint forces real (0 or 1) diagonal entries and `u_ji = ū_ij`, so
/// only the diagonal and upper triangle are enumerated.
pub fn enumerate_selfadjoint_invertible(m: usize) -> Result<Vec<Gf4Matrix>> {
    if m > MAX_SELFADJOINT_ENUM {
        return Err(Error::Budget {
            required: 4u128.pow((m * m) as u32),
            budget: 4u128.pow((MAX_SELFADJOINT_ENUM * MAX_SELFADJOINT_ENUM) as u32),
        });
    }
    let upper: Vec<(usize, usize)> = (0..m).flat_map(|i| (i + 1..m).map(move |j| (i, j))).collect();
    let total = 1u64 << (m + 2 * upper.len());
    let mut out = Vec::new();
    for code in 0..total {
        let mut u = Gf4Matrix::zeros(m, m);
        for i in 0..m {
            if code >> i & 1 == 1 {
                u.set(i, i, Gf4::ONE);
            }
        }
        for (k, &(i, j)) in upper.iter().enumerate() {
            let x = Gf4::from_code((code >> (m + 2 * k) & 3) as u8);
            u.set(i, j, x);
            u.set(j, i, x.conj());
        }
        if u.is_invertible() {
            out.push(u);
        }
    }
    Ok(out)
}

/// `∂ = δ₁ ⊗ I + I ⊗ δ₂`.
pub fn gf4_product(d1: &Gf4Boundary, d2: &Gf4Boundary) -> Gf4Boundary {
    let (m1, m2) = (d1.dim(), d2.dim());
    let partial = d1
        .matrix()
        .kron(&Gf4Matrix::identity(m2))
        .add(&Gf4Matrix::identity(m1).kron(d2.matrix()));
    Gf4Boundary::new(partial).expect("product of self-adjoint boundaries is a self-adjoint boundary")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::{five_qubit_checks, steane_checks_gf4};
    use crate::gf4::hermitian_inner;

    fn brute_selfadjoint_invertible(m: usize) -> Vec<Gf4Matrix> {
        (0..4u64.pow((m * m) as u32))
            .map(|code| Gf4Matrix::from_fn(m, m, |r, c| Gf4::from_code((code >> (2 * (r * m + c)) & 3) as u8)))
            .filter(|u| u.is_self_adjoint() && u.is_invertible())
            .collect()
    }

    #[test]
    fn selfadjoint_counts() {
        assert_eq!(
            enumerate_selfadjoint_invertible(1).unwrap(),
            vec![Gf4Matrix::identity(1)]
        );
        let two = enumerate_selfadjoint_invertible(2).unwrap();
        assert_eq!(two.len(), 10);
        for m in 1..=2 {
            let mut a = enumerate_selfadjoint_invertible(m).unwrap();
            let mut b = brute_selfadjoint_invertible(m);
            a.sort_by_key(|u| format!("{u:?}"));
            b.sort_by_key(|u| format!("{u:?}"));
            assert_eq!(a, b);
        }
        let three = enumerate_selfadjoint_invertible(3).unwrap();
        let distinct: std::collections::HashSet<_> = three.iter().collect();
        assert_eq!(distinct.len(), three.len());
        assert!(three.iter().all(|u| u.is_self_adjoint() && u.rank() == 3));
        assert!(matches!(enumerate_selfadjoint_invertible(4), Err(Error::Budget { .. })));
    }

    #[test]
    fn five_qubit_boundary() {
        let d = gf4_boundary_from_checks(5, &five_qubit_checks(), &Gf4Matrix::identity(2)).unwrap();
        assert_eq!(d.hom_dim(), 1);
        assert!(d.weight() <= 4);
        let im = d.image();
        for a in five_qubit_checks() {
            assert!(im.contains(&a));
        }
    }

    #[test]
    fn every_u_gives_valid_boundary() {
        for u in enumerate_selfadjoint_invertible(2).unwrap() {
            let d = gf4_boundary_from_checks(5, &five_qubit_checks(), &u).unwrap();
            let m = d.matrix();
            assert!(m.adjoint().mul(m).is_zero());
            let im = m.image_basis();
            for f in &im {
                for g in &im {
                    assert!(hermitian_inner(f, g).unwrap().is_zero());
                }
            }
            assert_eq!(d.hom_dim(), 5 - 2 * im.len());
            assert!(d.weight() <= 4);
        }
        for u in enumerate_selfadjoint_invertible(3).unwrap().iter().take(20) {
            let d = gf4_boundary_from_checks(7, &steane_checks_gf4(), u).unwrap();
            assert_eq!(d.hom_dim(), 1);
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        let one = [Gf4Vec::parse("1").unwrap()];
        assert!(matches!(
            gf4_boundary_from_checks(1, &one, &Gf4Matrix::identity(1)),
            Err(Error::Precondition(_))
        ));
        let not_sa = Gf4Matrix::from_strs(&["1w", "w1"]);
        assert!(matches!(
            gf4_boundary_from_checks(5, &five_qubit_checks(), &not_sa),
            Err(Error::Precondition(_))
        ));
        assert_eq!(
            gf4_boundary_from_checks(4, &[], &Gf4Matrix::zeros(0, 0)).unwrap(),
            Gf4Boundary::zero(4)
        );
    }

    #[test]
    fn products() {
        let us = enumerate_selfadjoint_invertible(2).unwrap();
        let d1 = gf4_boundary_from_checks(5, &five_qubit_checks(), &us[0]).unwrap();
        let d2 = gf4_boundary_from_checks(5, &five_qubit_checks(), &us[9]).unwrap();
        let p = gf4_product(&d1, &d2);
        assert_eq!((p.dim(), p.hom_dim()), (25, 1));
        assert!(p.weight() <= 8);
        assert!(p.matrix().is_self_adjoint());
        let z = gf4_product(&Gf4Boundary::zero(2), &Gf4Boundary::zero(3));
        assert!(z.matrix().is_zero());
    }
}
