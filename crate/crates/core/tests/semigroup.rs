mod common;

use common::random_projection;
use projlab::classes::{d_radius_interval, radius_excess};
use projlab::linalg::induced_norm;
use projlab::{ComplexMatrix, Exponent, SemigroupExpr, SpaceDescriptor};
use proptest::prelude::*;

fn generators(n: usize, dim: usize, seed: u64) -> Vec<ComplexMatrix> {
    (0..n)
        .map(|k| random_projection(dim, 1 + (seed as usize + k) % (dim - 1), seed * 31 + k as u64))
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn random_elements_are_valid(n in 1usize..5, depth in 1usize..5, seed in any::<u64>()) {
        let e = SemigroupExpr::random(n, depth, seed).unwrap();
        prop_assert!(e.validate(n).is_empty());
        prop_assert!(!e.index_set().is_empty());
        prop_assert!(e.index_set().iter().all(|&k| (1..=n).contains(&k)));
    }

    #[test]
    fn evaluation_is_a_contraction(n in 1usize..4, depth in 1usize..4, dim in 2usize..6, seed in 0u64..1000) {
        let gens = generators(n, dim, seed);
        let e = SemigroupExpr::random(n, depth, seed).unwrap();
        let t = e.evaluate(&gens).unwrap();
        prop_assert!(induced_norm(&t, Exponent::TWO) <= 1.0 + 1e-10);
    }

    #[test]
    fn flattening_preserves_the_value(n in 1usize..4, depth in 1usize..5, seed in 0u64..1000) {
        let gens = generators(n, 4, seed);
        let e = SemigroupExpr::random(n, depth, seed).unwrap();
        let flat = e.flattened();
        prop_assert!(flat.validate(n).is_empty());
        let diff = e.evaluate(&gens).unwrap().max_abs_diff(&flat.evaluate(&gens).unwrap());
        prop_assert!(diff <= 1e-12, "diff {diff}");
    }

    #[test]
    fn radius_arithmetic_certifies_the_value(n in 1usize..4, depth in 1usize..4, seed in 0u64..1000) {
        // Hermitian projections are u-projections: r = 1/2 is certified for each.
        let gens = generators(n, 4, seed);
        let space = SpaceDescriptor::hilbert(4);
        let radii: Vec<f64> = gens
            .iter()
            .map(|g| {
                let r = d_radius_interval(g, &space).unwrap();
                assert!(r.contains(0.5));
                0.5
            })
            .collect();
        let e = SemigroupExpr::random(n, depth, seed).unwrap();
        let r = e.predicted_radius(&radii);
        let t = e.evaluate(&gens).unwrap();
        prop_assert!(r > 0.0 && r < 1.0);
        prop_assert!(radius_excess(&t, Exponent::TWO, r) <= 1e-9);
    }
}

#[test]
fn nested_nodes_flatten_into_parents() {
    let e = SemigroupExpr::Product(vec![
        SemigroupExpr::Product(vec![SemigroupExpr::Leaf(1), SemigroupExpr::Leaf(2)]),
        SemigroupExpr::Leaf(1),
    ]);
    assert_eq!(e.flattened(), SemigroupExpr::product_of(&[1, 2, 1]));
    let c = SemigroupExpr::Convex(vec![
        (0.5, SemigroupExpr::convex_of(&[0.5, 0.5])),
        (0.5, SemigroupExpr::Leaf(3)),
    ]);
    let SemigroupExpr::Convex(terms) = c.flattened() else { panic!() };
    let weights: Vec<f64> = terms.iter().map(|t| t.0).collect();
    assert_eq!(weights, vec![0.25, 0.25, 0.5]);
}
