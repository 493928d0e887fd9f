//! Geometry of ℓᵖ and projections.

mod geometry;
mod projection;

pub use geometry::{
    beta_modulus, beta_modulus_with, delta_modulus, delta_modulus_with, hilbert_beta,
    hilbert_delta, BoundSide, GeometryEstimate,
};
pub use projection::{
    default_t_grid, hermitian_defect, is_orthoprojection, make_projection, OrthoReport,
    OrthoStatus, ProjectionKind, ProjectionSpec, IDEMPOTENCE_TOL,
};
