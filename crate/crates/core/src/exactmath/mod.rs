//! Exact integer and rational arithmetic: polynomials, truncated power series,
//! integer matrices, Smith normal form and characteristic polynomials.
//!
//! Nothing in this crate uses floating point.

mod charpoly;
mod linalg;
mod matrix;
mod poly;
mod snf;

pub use charpoly::{charpoly_division_free, det_one_minus_t, det_one_minus_t_of_power};
pub use linalg::{extend_basis, kernel, rank_integer, rank_rational, rank_sparse, rref, SparseEchelon, SparseRow};
pub use matrix::IntMatrix;
pub use poly::Poly;
pub use snf::{smith_normal_form, SnfResult};

pub type BigRat = num_rational::BigRational;

use crate::error::Result;

pub fn series_inverse(p: &Poly, order: usize) -> Result<Poly> {
    p.series_inverse(order)
}

pub fn poly_div_exact(num: &Poly, den: &Poly) -> Result<Poly> {
    num.div_exact(den)
}

pub fn rat(n: i64) -> BigRat {
    BigRat::from_integer(n.into())
}
