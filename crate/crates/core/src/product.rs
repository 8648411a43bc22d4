//! The single-sector homological product `∂ = δ₁ ⊗ I + I ⊗ δ₂`.
//!
//! The product space uses row-major indexing: basis vector `i ⊗ j` has index
//! `i · M₂ + j`, so a vector is an `M₁ × M₂` matrix read row by row.

use serde::Serialize;

use crate::complex::BoundaryOperator;
use crate::error::{Error, Result};
use crate::gf2::{Basis, BitMatrix, BitVec};

/// Default cap on `M₁M₂` for the explicit subspace check in [`kunneth_report`].
pub const KUNNETH_SUBSPACE_CAP: usize = 400;

#[derive(Clone, Debug)]
pub struct ProductComplex {
    partial: BoundaryOperator,
    factors: (BoundaryOperator, BoundaryOperator),
}

impl ProductComplex {
    pub fn operator(&self) -> &BoundaryOperator {
        &self.partial
    }

    pub fn factors(&self) -> (&BoundaryOperator, &BoundaryOperator) {
        (&self.factors.0, &self.factors.1)
    }

    /// Row-major index of `i ⊗ j`.
    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.factors.1.dim() + j
    }

    /// Reshape a product vector as an `M₁ × M₂` matrix.
    pub fn reshape(&self, v: &BitVec) -> BitMatrix {
        reshape(v, self.factors.0.dim(), self.factors.1.dim())
    }
}

pub fn reshape(v: &BitVec, rows: usize, cols: usize) -> BitMatrix {
    assert_eq!(v.len(), rows * cols);
    let mut m = BitMatrix::zeros(rows, cols);
    for idx in v.iter_ones() {
        m.set(idx / cols, idx % cols, true);
    }
    m
}

pub fn flatten(m: &BitMatrix) -> BitVec {
    let cols = m.cols();
    BitVec::from_ones(
        m.rows() * cols,
        (0..m.rows()).flat_map(|r| m.row_ones(r).map(move |c| r * cols + c).collect::<Vec<_>>()),
    )
}

/// `δ₁ ⊗ I + I ⊗ δ₂` as a plain matrix.
pub fn product_matrix(d1: &BitMatrix, d2: &BitMatrix) -> BitMatrix {
    let (m1, m2) = (d1.rows(), d2.rows());
    let mut out = BitMatrix::zeros(m1 * m2, m1 * m2);
    for i in 0..m1 {
        for k in d1.row_ones(i) {
            for j in 0..m2 {
                out.flip(i * m2 + j, k * m2 + j);
            }
        }
    }
    for j in 0..m2 {
        for l in d2.row_ones(j) {
            for i in 0..m1 {
                out.flip(i * m2 + j, i * m2 + l);
            }
        }
    }
    out
}

pub fn product(d1: &BoundaryOperator, d2: &BoundaryOperator) -> ProductComplex {
    let partial = BoundaryOperator::new(product_matrix(d1.matrix(), d2.matrix()))
        .expect("product of boundary operators squares to zero");
    ProductComplex {
        partial,
        factors: (d1.clone(), d2.clone()),
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct KunnethReport {
    pub hom_dim_product: usize,
    pub hom_dim_factors: (usize, usize),
    pub dimension_identity_holds: bool,
    /// `dim ker ∂`, present when the subspace check ran.
    pub kernel_dim: Option<usize>,
    /// `dim(ker δ₁ ⊗ ker δ₂ + im ∂)`, present when the subspace check ran.
    pub tensor_plus_image_dim: Option<usize>,
    pub subspace_identity_holds: Option<bool>,
}

pub fn kunneth_report(p: &ProductComplex) -> KunnethReport {
    kunneth_report_with_cap(p, KUNNETH_SUBSPACE_CAP)
}

pub fn kunneth_report_with_cap(p: &ProductComplex, cap: usize) -> KunnethReport {
    let (d1, d2) = p.factors();
    let h = p.operator().hom_dim();
    let (h1, h2) = (d1.hom_dim(), d2.hom_dim());
    let mut report = KunnethReport {
        hom_dim_product: h,
        hom_dim_factors: (h1, h2),
        dimension_identity_holds: h == h1 * h2,
        kernel_dim: None,
        tensor_plus_image_dim: None,
        subspace_identity_holds: None,
    };
    let n = p.operator().dim();
    if n <= cap {
        let kernel = p.operator().kernel();
        let mut gens = p.operator().image().vectors();
        for a in d1.kernel().vectors() {
            for b in d2.kernel().vectors() {
                gens.push(a.kron(&b));
            }
        }
        let sum = Basis::span_of(n, &gens);
        report.kernel_dim = Some(kernel.dim());
        report.tensor_plus_image_dim = Some(sum.dim());
        report.subspace_identity_holds = Some(sum.same_span(&kernel));
    }
    report
}

/// Coset representatives `h₁ⁱ ⊗ h₂ʲ` of `ker ∂ / im ∂`.
pub fn logical_basis(p: &ProductComplex) -> Result<Vec<BitVec>> {
    let (d1, d2) = p.factors();
    if d1.hom_dim() == 0 || d2.hom_dim() == 0 {
        return Err(Error::NoLogicals);
    }
    let r1 = d1.homology_representatives();
    let r2 = d2.homology_representatives();
    Ok(r1.iter().flat_map(|a| r2.iter().map(move |b| a.kron(b))).collect())
}
