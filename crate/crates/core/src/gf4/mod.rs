//! GF(4)-linear stabilizer codes from self-adjoint boundary operators.

mod boundary;
mod distance;
mod field;
mod matrix;
mod vector;

pub use boundary::{
    enumerate_selfadjoint_invertible, gf4_boundary_from_checks, gf4_product, Gf4Boundary, MAX_SELFADJOINT_ENUM,
};
pub use distance::{
    gf4_distance, gf4_distance_upper_bound, gf4_distance_with, BoundedMethod, BoundedSearch, Gf4DistanceResult,
};
pub use field::Gf4;
pub use matrix::{row_space, Gf4Echelon, Gf4Matrix, Gf4Span};
pub use vector::{hermitian_inner, is_self_orthogonal, Gf4Vec};
