//! Dense complex linear algebra.

mod eigen;
mod expm;
mod lu;
mod matrix;
pub(crate) mod norms;
mod subspace;
mod svd;

pub use eigen::{eigen_decomposition, eigenvalues, EigenPair, DEFAULT_EIGEN_TOL};
pub use expm::expm;
pub use lu::Lu;
pub use matrix::{ComplexMatrix, MatrixJson, C64};
pub use norms::{
    dot, induced_norm, operator_norm, scale_to_unit, vec_norm, Exponent, NormEstimate,
    SpaceDescriptor, NORM_STARTS,
};
pub use subspace::{
    column_space, intersect_subspaces, null_space, orthonormalize, principal_angles,
    projector_onto, DEFAULT_RANK_TOL,
};
pub use svd::{singular_values, svd, Svd};
