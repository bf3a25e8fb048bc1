//! Linearization, lifted inequalities and their facet condition, the
//! flipping map, and the bijection with `MC^H_≤(D)`.

mod catalog;
mod maps;
mod poly;
mod theorem;

pub use catalog::{cycle_inequality, facet_catalog, simple_cycles, standard_inequalities, CatalogEntry};
pub use maps::{d_expression, flip, proj_leq, psi, unproj};
pub use poly::{linearize, ConflictMode, MultilinearPoly};
pub use theorem::{
    check_condition, compute_v0_v1, count_selections, e_u, enumerate_selections, lift, projection_ranks,
    verify_lift_theorem, Classification, LiftReport, LiftRow, LiftSelection, MPInequality, ProjectionRankRow,
};
