#![allow(dead_code)]

use projlab::linalg::C64;
use projlab::sampling::{gaussian_vector, rng_for};
use projlab::spaces::{make_projection, ProjectionSpec};
use projlab::{ComplexMatrix, SpaceDescriptor};

/// Euclidean orthoprojection onto a random subspace of dimension `rank`.
pub fn random_projection(dim: usize, rank: usize, seed: u64) -> ComplexMatrix {
    random_projection_containing(dim, rank, &[], seed)
}

/// Same, with the subspace forced to contain `planted`.
pub fn random_projection_containing(dim: usize, rank: usize, planted: &[Vec<C64>], seed: u64) -> ComplexMatrix {
    let mut rng = rng_for(seed, 77, 0);
    let mut basis: Vec<Vec<C64>> = planted.to_vec();
    while basis.len() < rank {
        basis.push(gaussian_vector(&mut rng, dim));
    }
    make_projection(&ProjectionSpec::hilbert_span(basis), &SpaceDescriptor::hilbert(dim)).unwrap()
}

pub fn random_vector(dim: usize, seed: u64) -> Vec<C64> {
    gaussian_vector(&mut rng_for(seed, 78, 0), dim)
}

pub fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}
