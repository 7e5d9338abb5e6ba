//! Verification pipelines, reports and the result cache.

mod cache;
mod collection;
mod pipeline;
mod report;

pub use cache::{Cache, Lookup, CACHE_DIR_ENV, CACHE_VERSION};
pub use collection::{
    build_collection, collection_recipe, collection_twist, ladder_recipe, prime_recipe, CollectionSpec, Recipe,
};
pub use pipeline::{
    closed_form_check, collection_table, nakayama_cartan, odd_square_zero, search_triangle, verify_euler,
    verify_invariants, verify_main_theorem, verify_monodromy, verify_reduction, verify_triangles, VerifyOptions,
};
pub use report::{emit_report, parse_report, Check, Format, Status, VerificationReport, SCHEMA_VERSION, TOOL_VERSION};
