//! Check bases of the small seed codes.

use crate::complex::BoundaryOperator;
use crate::css::boundary_from_checks;
use crate::error::Result;
use crate::gf2::{BitMatrix, BitVec};
use crate::gf4::{gf4_boundary_from_checks, Gf4, Gf4Boundary, Gf4Matrix, Gf4Vec};

/// Rows of the 7×3 Steane check matrix; its columns are the three checks.
pub const STEANE_ROWS: [&str; 7] = ["100", "010", "001", "011", "101", "110", "111"];

pub fn steane_matrix() -> BitMatrix {
    BitMatrix::from_strs(&STEANE_ROWS)
}

/// The three weight-4 checks `a¹, a², a³` of the [[7,1,3]] code.
pub fn steane_checks() -> Vec<BitVec> {
    let a = steane_matrix();
    (0..3).map(|c| a.col(c)).collect()
}

/// Steane checks lifted to GF(4).
pub fn steane_checks_gf4() -> Vec<Gf4Vec> {
    steane_checks()
        .iter()
        .map(|v| {
            Gf4Vec::from_elems(
                &v.iter()
                    .map(|b| if b { Gf4::ONE } else { Gf4::ZERO })
                    .collect::<Vec<_>>(),
            )
        })
        .collect()
}

/// The two checks of the [[5,1,3]] code; the second is a cyclic shift of the first.
pub fn five_qubit_checks() -> Vec<Gf4Vec> {
    use Gf4 as F;
    vec![
        Gf4Vec::from_elems(&[F::ZERO, F::W, F::W2, F::W2, F::W]),
        Gf4Vec::from_elems(&[F::W, F::ZERO, F::W, F::W2, F::W2]),
    ]
}

/// Steane boundary operator `A U Aᵀ` for an invertible 3×3 `u`.
pub fn steane_boundary(u: &BitMatrix) -> Result<BoundaryOperator> {
    boundary_from_checks(7, &steane_checks(), u)
}

/// GF(4) Steane boundary `A U A*` for an invertible self-adjoint 3×3 `u`.
pub fn steane_gf4_boundary(u: &Gf4Matrix) -> Result<Gf4Boundary> {
    gf4_boundary_from_checks(7, &steane_checks_gf4(), u)
}

/// [[5,1,3]] boundary `A U A*` for an invertible self-adjoint 2×2 `u`.
pub fn five_qubit_boundary(u: &Gf4Matrix) -> Result<Gf4Boundary> {
    gf4_boundary_from_checks(5, &five_qubit_checks(), u)
}
