//! CSS codes and their translation to and from boundary operators.

use crate::complex::BoundaryOperator;
use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVec};

/// A CSS code given by Z-type and X-type parity-check matrices (rows are checks).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CssCode {
    n: usize,
    a_z: BitMatrix,
    a_x: BitMatrix,
    k: usize,
    pub d_z: Option<usize>,
    pub d_x: Option<usize>,
}

impl CssCode {
    /// Validates `A_Z · A_Xᵀ = 0` and derives `k`.
    pub fn new(a_z: BitMatrix, a_x: BitMatrix) -> Result<Self> {
        if a_z.cols() != a_x.cols() {
            return Err(Error::Dimension {
                expected: a_z.cols(),
                found: a_x.cols(),
            });
        }
        if !a_z.mul(&a_x.transpose()).is_zero() {
            return Err(Error::Precondition("Z and X checks do not commute".into()));
        }
        let n = a_z.cols();
        let k = n - a_z.rank() - a_x.rank();
        Ok(CssCode {
            n,
            a_z,
            a_x,
            k,
            d_z: None,
            d_x: None,
        })
    }

    /// Skips the commutation and rank checks; for constructions that preserve both.
    pub(crate) fn from_parts(a_z: BitMatrix, a_x: BitMatrix, k: usize) -> Self {
        debug_assert_eq!(a_z.cols(), a_x.cols());
        CssCode {
            n: a_z.cols(),
            a_z,
            a_x,
            k,
            d_z: None,
            d_x: None,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn a_z(&self) -> &BitMatrix {
        &self.a_z
    }

    pub fn a_x(&self) -> &BitMatrix {
        &self.a_x
    }

    pub fn stabilizer_weight(&self) -> usize {
        stabilizer_weight(self)
    }

    /// Largest check (row) weight over both matrices.
    pub fn max_check_weight(&self) -> usize {
        let z = (0..self.a_z.rows()).map(|r| self.a_z.row_weight(r));
        let x = (0..self.a_x.rows()).map(|r| self.a_x.row_weight(r));
        z.chain(x).max().unwrap_or(0)
    }

    /// Largest number of checks acting on a single qubit, over both matrices.
    pub fn max_qubit_degree(&self) -> usize {
        let z = self.a_z.col_weights().into_iter().max().unwrap_or(0);
        let x = self.a_x.col_weights().into_iter().max().unwrap_or(0);
        z.max(x)
    }

    pub fn is_orthogonal(&self) -> bool {
        self.a_z.mul(&self.a_x.transpose()).is_zero()
    }

    /// Same code with only a maximal independent subset of rows (first occurrences kept).
    pub fn independent_checks(&self) -> CssCode {
        CssCode {
            a_z: independent_rows(&self.a_z),
            a_x: independent_rows(&self.a_x),
            ..self.clone()
        }
    }

    pub fn params_json(&self) -> serde_json::Value {
        serde_json::json!({
            "n": self.n,
            "k": self.k,
            "w": self.stabilizer_weight(),
            "d_z": self.d_z,
            "d_x": self.d_x,
            "z_checks": self.a_z.rows(),
            "x_checks": self.a_x.rows(),
            "independent_z_checks": self.a_z.rank(),
            "independent_x_checks": self.a_x.rank(),
        })
    }
}

fn independent_rows(m: &BitMatrix) -> BitMatrix {
    let mut kept = BitMatrix::zeros(0, m.cols());
    let mut rank = 0;
    for r in 0..m.rows() {
        let mut trial = kept.clone();
        trial.push_row(&m.row(r));
        let tr = trial.rank();
        if tr > rank {
            kept = trial;
            rank = tr;
        }
    }
    kept
}

/// `A_X = δ`, `A_Z = δᵀ`: the Z checks span `im δ`, the X checks span `im δᵀ`.
pub fn code_from_complex(d: &BoundaryOperator) -> CssCode {
    let a_x = d.matrix().clone();
    let a_z = a_x.transpose();
    CssCode {
        n: d.dim(),
        k: d.dim() - 2 * d.rank(),
        a_z,
        a_x,
        d_z: None,
        d_x: None,
    }
}

/// `δ = A U Aᵀ` where the columns of `A` are the given self-orthogonal checks.
pub fn boundary_from_checks(n: usize, basis: &[BitVec], u: &BitMatrix) -> Result<BoundaryOperator> {
    let m = basis.len();
    if u.rows() != m || u.cols() != m {
        return Err(Error::Dimension {
            expected: m,
            found: u.rows(),
        });
    }
    for (i, a) in basis.iter().enumerate() {
        if a.len() != n {
            return Err(Error::Dimension {
                expected: n,
                found: a.len(),
            });
        }
        for b in &basis[i..] {
            if a.dot(b) {
                return Err(Error::Precondition("check basis is not self-orthogonal".into()));
            }
        }
    }
    if m > 0 && !u.is_invertible() {
        return Err(Error::Precondition("mixing matrix U is singular".into()));
    }
    if m > 0 && BitMatrix::from_rows(n, basis).rank() != m {
        return Err(Error::Precondition("check vectors are linearly dependent".into()));
    }
    let a = BitMatrix::from_cols(n, basis);
    let delta = if m == 0 {
        BitMatrix::zeros(n, n)
    } else {
        a.mul(u).mul(&a.transpose())
    };
    BoundaryOperator::new(delta)
}

/// Max over every row and every column of both check matrices.
pub fn stabilizer_weight(c: &CssCode) -> usize {
    c.a_z.max_row_col_weight().max(c.a_x.max_row_col_weight())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::steane_checks;
    use crate::complex::canonical_boundary;
    use crate::gf2::Basis;

    fn steane_delta(u: &BitMatrix) -> BoundaryOperator {
        boundary_from_checks(7, &steane_checks(), u).unwrap()
    }

    #[test]
    fn canonical_code_params() {
        let c = code_from_complex(&canonical_boundary(1, 1));
        assert_eq!((c.n(), c.k(), c.stabilizer_weight()), (3, 1, 1));
        let z = code_from_complex(&BoundaryOperator::new(BitMatrix::zeros(5, 5)).unwrap());
        assert_eq!((z.n(), z.k(), z.stabilizer_weight()), (5, 5, 0));
    }

    #[test]
    fn steane_boundary() {
        let d = steane_delta(&BitMatrix::identity(3));
        assert_eq!(d.rank(), 3);
        assert_eq!(d.hom_dim(), 1);
        let m = d.matrix();
        for r in 0..7 {
            assert!(matches!(m.row_weight(r), 0 | 4));
        }
        for w in m.col_weights() {
            assert!(matches!(w, 0 | 4));
        }
        let c = code_from_complex(&d);
        assert_eq!((c.n(), c.k(), c.stabilizer_weight()), (7, 1, 4));
        let span = Basis::span_of(7, &steane_checks());
        assert!(d.image().same_span(&span));
        assert!(d.transpose().image().same_span(&span));
    }

    #[test]
    fn permuted_u_keeps_image() {
        let base = steane_delta(&BitMatrix::identity(3));
        let p = BitMatrix::from_strs(&["010", "001", "100"]);
        let d = steane_delta(&p);
        assert!(d.image().same_span(&base.image()));
        assert_ne!(d.matrix(), base.matrix());
    }

    #[test]
    fn empty_basis_gives_zero_operator() {
        let d = boundary_from_checks(4, &[], &BitMatrix::zeros(0, 0)).unwrap();
        assert!(d.matrix().is_zero());
        assert_eq!(code_from_complex(&d).k(), 4);
    }

    #[test]
    fn rejects_bad_inputs() {
        let bad = vec![BitVec::from_bit_str("1000000")];
        assert!(matches!(
            boundary_from_checks(7, &bad, &BitMatrix::identity(1)),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            boundary_from_checks(7, &steane_checks(), &BitMatrix::zeros(3, 3)),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn independent_checks_keep_rank() {
        let c = code_from_complex(&steane_delta(&BitMatrix::identity(3)));
        let ind = c.independent_checks();
        assert_eq!(ind.a_z().rows(), 3);
        assert_eq!(ind.a_x().rows(), 3);
        assert_eq!(ind.k(), 1);
        assert!(ind.is_orthogonal());
    }

    #[test]
    fn zero_check_code_weight() {
        let c = CssCode::new(BitMatrix::zeros(0, 4), BitMatrix::zeros(0, 4)).unwrap();
        assert_eq!(stabilizer_weight(&c), 0);
        assert_eq!(c.k(), 4);
    }
}
