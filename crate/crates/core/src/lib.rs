//! Numerical laboratory for powers of products and convex combinations of
//! projections on finite-dimensional complex ℓᵖ spaces.
//!
//! The crate is organised bottom-up:
//!
//! * [`linalg`] dense complex matrices, induced norms, eigenvalues, SVD,
//!   null spaces and the matrix exponential;
//! * [`spaces`] geometry of ℓᵖ (moduli δ and β) and projections;
//! * [`classes`] estimators for the contraction classes (H), (D), (W');
//! * [`apostol`] the Apostol moduli φ, φ̃ and their limit ω;
//! * [`spectral`] boundary spectrum, amplitude and Katznelson–Tzafriri bounds;
//! * [`dynamics`] power iteration, ergodic projection and range formulas;
//! * [`expr`] expressions in the convex multiplicative semigroup.
//!
//! Every randomized estimator draws from [`sampling`], which fans work out
//! with rayon when the `parallel` feature is enabled and merges results in a
//! fixed order, so parallel and sequential runs agree bit for bit.

pub mod apostol;
pub mod classes;
pub mod dynamics;
mod error;
pub mod expr;
pub mod linalg;
pub mod sampling;
pub mod spaces;
pub mod spectral;
pub mod verdict;

pub use error::{Error, Result};
pub use expr::SemigroupExpr;
pub use linalg::{ComplexMatrix, Exponent, NormEstimate, SpaceDescriptor, C64};
pub use sampling::{Execution, SamplingConfig};
pub use verdict::Verdict;
