//! `L_f`-graded matrix factorizations: Koszul stabilization, the translation
//! and Serre functors, cones, direct sums and homotopy reduction.

mod factorization;
mod graded;
mod poly;

pub use factorization::{MatrixFactorization, MfJson, MFMorphism};
pub use graded::{GradedFreeModule, GradedMatrix, Ring, RingRef};
pub use poly::{MPoly, Monomial};
