//! Stable morphism spaces between graded matrix factorizations, computed by
//! exact linear algebra on graded pieces of the Hom complex.

mod closed_form;
mod complex;
mod table;

pub use closed_form::{closed_form_hom, closed_form_monomials};
pub use complex::{hom_basis, hom_dim, hom_dim_calls, hom_dim_p, is_null_homotopic, HomComplex, HomQuery};
pub use table::{
    degree_weight_bounds, degrees_in_weight_range, euler_form, max_slot_weight, scan_bounds, scan_window, serre_symmetry_check,
    ExceptionalityReport, HomEntry, HomTable,
};
