//! Homological product codes over GF(2) and GF(4).
//!
//! The crate builds CSS codes from single-sector chain complexes (square
//! matrices with `δ² = 0`), forms their homological products, and computes
//! exact distances with a parallel Gray-code coset search. Alongside sit
//! exact counting formulas with brute-force oracles, encoder synthesis, and
//! a stabilizer-splitting weight reduction.

pub mod circuit;
pub mod codes;
pub mod complex;
pub mod counting;
pub mod css;
pub mod distance;
pub mod error;
pub mod experiments;
pub mod gf2;
pub mod gf4;
pub mod io;
pub mod par;
pub mod product;
pub mod reduction;

pub use complex::BoundaryOperator;
pub use css::CssCode;
pub use distance::{DistanceResult, SearchOptions};
pub use error::{Error, Result};
pub use gf2::{Basis, BitMatrix, BitVec};
