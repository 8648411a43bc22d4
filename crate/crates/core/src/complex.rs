//! Single-sector chain complexes: a square matrix `δ` over GF(2) with `δ² = 0`.

use rand::Rng;

use crate::error::{Error, Result};
use crate::gf2::{image_basis, kernel_basis, random_invertible, Basis, BitMatrix, BitVec};

/// A validated boundary operator with cached rank and homological dimension.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BoundaryOperator {
    delta: BitMatrix,
    rank: usize,
    hom_dim: usize,
}

impl BoundaryOperator {
    /// Checks squareness and `δ² = 0`.
    pub fn new(delta: BitMatrix) -> Result<Self> {
        if !delta.is_square() {
            return Err(Error::Dimension {
                expected: delta.rows(),
                found: delta.cols(),
            });
        }
        if !delta.mul(&delta).is_zero() {
            return Err(Error::Precondition("boundary operator must square to zero".into()));
        }
        let rank = delta.rank();
        let hom_dim = delta.rows() - 2 * rank;
        Ok(BoundaryOperator { delta, rank, hom_dim })
    }

    pub fn matrix(&self) -> &BitMatrix {
        &self.delta
    }

    pub fn into_matrix(self) -> BitMatrix {
        self.delta
    }

    /// Dimension `M` of the underlying space.
    pub fn dim(&self) -> usize {
        self.delta.rows()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// `H = dim ker δ − dim im δ`.
    pub fn hom_dim(&self) -> usize {
        self.hom_dim
    }

    pub fn transpose(&self) -> BoundaryOperator {
        BoundaryOperator {
            delta: self.delta.transpose(),
            rank: self.rank,
            hom_dim: self.hom_dim,
        }
    }

    pub fn kernel(&self) -> Basis {
        kernel_basis(&self.delta)
    }

    pub fn image(&self) -> Basis {
        image_basis(&self.delta)
    }

    /// Representatives `h¹…h^H` of `ker δ / im δ`: the kernel basis vectors that
    /// extend the image basis, taken greedily in echelon order.
    pub fn homology_representatives(&self) -> Vec<BitVec> {
        self.image().complement_in(&self.kernel())
    }

    /// Maximum row/column weight.
    pub fn weight(&self) -> usize {
        self.delta.max_row_col_weight()
    }

    /// An invertible `U` with `δ = U δ₀ U⁻¹`, built from a kernel/image basis and
    /// preimages of the image basis.
    pub fn canonical_witness(&self) -> BitMatrix {
        let (h, l) = (self.hom_dim, self.rank);
        let m = self.dim();
        let image = self.image().vectors();
        let homology = self.homology_representatives();
        debug_assert_eq!(homology.len(), h);
        let preimages: Vec<BitVec> = image
            .iter()
            .map(|v| self.delta.solve(v).expect("image vector has a preimage"))
            .collect();
        let mut cols = Vec::with_capacity(m);
        cols.extend(homology);
        cols.extend(image);
        cols.extend(preimages);
        debug_assert_eq!(cols.len(), h + 2 * l);
        BitMatrix::from_cols(m, &cols)
    }
}

/// `δ₀(h, l)`: blocks of size `h, l, l`, identity in the (2,3) block.
pub fn canonical_boundary(h: usize, l: usize) -> BoundaryOperator {
    let m = h + 2 * l;
    let mut d = BitMatrix::zeros(m, m);
    for j in 0..l {
        d.set(h + j, h + l + j, true);
    }
    BoundaryOperator {
        delta: d,
        rank: l,
        hom_dim: h,
    }
}

/// `δ = U δ₀ U⁻¹` with `U` uniform over GL(m, 2): uniform over all `m × m`
/// boundary operators with homological dimension `h`.
pub fn random_boundary<R: Rng + ?Sized>(m: usize, h: usize, rng: &mut R) -> Result<BoundaryOperator> {
    if h > m || !(m - h).is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!(
            "m - h must be even and non-negative (m={m}, h={h})"
        )));
    }
    if m == 0 {
        return BoundaryOperator::new(BitMatrix::zeros(0, 0));
    }
    let l = (m - h) / 2;
    let u = random_invertible(m, rng);
    let u_inv = u.inverse().expect("sampled matrix is invertible");
    let delta = u.mul(canonical_boundary(h, l).matrix()).mul(&u_inv);
    let op = BoundaryOperator::new(delta)?;
    debug_assert_eq!(op.hom_dim(), h);
    Ok(op)
}

pub fn homological_dimension(d: &BoundaryOperator) -> usize {
    d.hom_dim()
}

/// True iff no nonzero kernel vector is supported on the last `M − m_prime`
/// coordinates, i.e. the projection onto the first `m_prime` coordinates is
/// injective on `ker δ`.
pub fn is_good(d: &BoundaryOperator, m_prime: usize) -> bool {
    assert!(m_prime <= d.dim(), "m_prime exceeds the dimension");
    let kernel = d.kernel();
    let projected = kernel.as_matrix().submatrix(0..kernel.dim(), 0..m_prime);
    projected.rank() == kernel.dim()
}

/// The operator induced on `V' = V / S^>`, where `V` is spanned by the first
/// `M'` coordinates and `S^> = Wδ(V^>)`.
#[derive(Clone, Debug)]
pub struct ReducedOperator {
    delta_prime: BoundaryOperator,
    complement: Vec<BitVec>,
    s_gt: Basis,
    m_prime: usize,
}

impl ReducedOperator {
    pub fn operator(&self) -> &BoundaryOperator {
        &self.delta_prime
    }

    /// `K = dim V'`.
    pub fn dim(&self) -> usize {
        self.complement.len()
    }

    pub fn m_prime(&self) -> usize {
        self.m_prime
    }

    pub fn s_gt(&self) -> &Basis {
        &self.s_gt
    }

    /// Representative in `V` of the coset with the given reduced coordinates.
    pub fn coset_lift(&self, coords: &BitVec) -> BitVec {
        assert_eq!(coords.len(), self.dim());
        let mut out = BitVec::zeros(self.m_prime);
        for k in coords.iter_ones() {
            out.xor_assign(&self.complement[k]);
        }
        out
    }

    /// Reduced coordinates of the coset `x + S^>` for `x ∈ V`.
    pub fn project(&self, x: &BitVec) -> BitVec {
        assert_eq!(x.len(), self.m_prime);
        let reduced = self.s_gt.reduce(x);
        let mut out = BitVec::zeros(self.dim());
        for (k, c) in self.complement.iter().enumerate() {
            // complement vectors are distinct unit vectors off the pivot set
            let idx = c.iter_ones().next().expect("unit vector");
            if reduced.get(idx) {
                out.set(k, true);
            }
        }
        out
    }

    /// The `K × M'` matrix of [`Self::project`].
    pub fn projection_matrix(&self) -> BitMatrix {
        let cols: Vec<BitVec> = (0..self.m_prime)
            .map(|i| self.project(&BitVec::unit(self.m_prime, i)))
            .collect();
        BitMatrix::from_cols(self.dim(), &cols)
    }
}

pub fn reduced_boundary(d: &BoundaryOperator, m_prime: usize) -> Result<ReducedOperator> {
    let m = d.dim();
    if m_prime > m {
        return Err(Error::InvalidParameter(format!("m_prime={m_prime} exceeds M={m}")));
    }
    if !is_good(d, m_prime) {
        return Err(Error::Precondition(format!(
            "boundary operator is not good at M'={m_prime}"
        )));
    }
    let delta = d.matrix();
    let tail_images: Vec<BitVec> = (m_prime..m)
        .map(|j| {
            let col = delta.col(j);
            BitVec::from_bools(&(0..m_prime).map(|i| col.get(i)).collect::<Vec<_>>())
        })
        .collect();
    let s_gt = Basis::span_of(m_prime, &tail_images);
    let mut is_pivot = vec![false; m_prime];
    for &p in s_gt.pivots() {
        is_pivot[p] = true;
    }
    let complement: Vec<BitVec> = (0..m_prime)
        .filter(|&i| !is_pivot[i])
        .map(|i| BitVec::unit(m_prime, i))
        .collect();
    let mut reduced = ReducedOperator {
        delta_prime: canonical_boundary(0, 0),
        complement,
        s_gt,
        m_prime,
    };
    let k = reduced.dim();
    let cols: Vec<BitVec> = (0..k)
        .map(|c| {
            let x = &reduced.complement[c];
            let full = x.concat(&BitVec::zeros(m - m_prime));
            let image = delta.mul_vec(&full);
            let w_image = BitVec::from_bools(&(0..m_prime).map(|i| image.get(i)).collect::<Vec<_>>());
            reduced.project(&w_image)
        })
        .collect();
    reduced.delta_prime = BoundaryOperator::new(BitMatrix::from_cols(k, &cols))?;
    Ok(reduced)
}
