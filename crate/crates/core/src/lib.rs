//! Maximally-graded matrix factorizations for invertible polynomials of chain
//! type `x1^a1 x2 + x2^a2 x3 + ... + xn^an`.
//!
//! The crate builds the graded category data exactly (no floating point):
//! the maximal grading group, Koszul stabilizations, stable morphism spaces,
//! Euler pairings of the Lefschetz-type exceptional collection, and the
//! accompanying lattice and monodromy invariants.

pub mod error;
pub mod chain;
pub mod exactmath;
pub mod homcalc;
pub mod invariants;
pub mod mf;
pub mod verify;

pub use error::{Error, Result};
