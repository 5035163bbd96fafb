//! The classical CCP polytope and visibility linear programs.

mod vertices;
mod visibility;

pub use vertices::{classical_vertices, Scenario, VertexSet, VERTEX_ENUMERATION_LIMIT};
pub use visibility::{
    is_classically_simulable, max_visibility, mixture_residual, VisibilityProblem,
    VisibilityResult, VisibilityStatus, MIXTURE_RESIDUAL_TOL, SIMULABLE_TOL, WEIGHT_TOL,
};
