mod common;

use common::{c, random_projection, random_projection_containing, random_vector};
use projlab::apostol::{apostol_phi, omega, Variant};
use projlab::classes::{d_radius_interval, halperin_constant, radius_excess};
use projlab::dynamics::{ergodic_projection, iterate};
use projlab::linalg::{eigenvalues, induced_norm, DEFAULT_EIGEN_TOL};
use projlab::spectral::{spectral_report, Amplitude, DEFAULT_BAND};
use projlab::{ComplexMatrix, Exponent, SamplingConfig, SpaceDescriptor, C64};
use proptest::prelude::*;

fn planted_product(dim: usize, count: usize, seed: u64) -> ComplexMatrix {
    let v = random_vector(dim, seed ^ 0xabc);
    (0..count)
        .map(|k| random_projection_containing(dim, 2 + (k % (dim - 2)), std::slice::from_ref(&v), seed + k as u64))
        .reduce(|a, b| &a * &b)
        .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn tau_matches_amplitude(angles in prop::collection::vec(-3.1f64..3.1, 1..4), r in 0.0f64..0.9) {
        let mut diag: Vec<C64> = angles.iter().map(|&t| C64::from_polar(1.0, t)).collect();
        diag.push(c(r));
        let rep = spectral_report(&ComplexMatrix::from_diag(&diag), DEFAULT_BAND).unwrap();
        let (Amplitude::Value(a), Amplitude::Value(tau)) = (rep.amplitude, rep.tau) else {
            return Err(TestCaseError::fail("boundary spectrum should be nonempty"));
        };
        prop_assert!((2.0 * (tau / 2.0).sin() - a).abs() <= 1e-12);
        let oracle = angles.iter().map(|&t| (c(1.0) - C64::from_polar(1.0, t)).norm()).fold(0.0, f64::max);
        prop_assert!((a - oracle).abs() <= 1e-9);
    }

    #[test]
    fn certified_radii_localize_the_spectrum(dim in 3usize..7, count in 1usize..4, seed in 0u64..500) {
        let t = planted_product(dim, count, seed);
        let space = SpaceDescriptor::hilbert(dim);
        let r = d_radius_interval(&t, &space).unwrap();
        if let Some((lo, hi)) = r.interval {
            let rep = spectral_report(&t, DEFAULT_BAND).unwrap();
            prop_assert!(rep.primitive);
            for probe in [hi, 0.5 * (lo + hi)] {
                if probe <= 0.0 || probe >= 1.0 {
                    continue;
                }
                for lambda in eigenvalues(&t, DEFAULT_EIGEN_TOL).unwrap() {
                    prop_assert!((lambda - c(probe)).norm() <= 1.0 - probe + 1e-8);
                }
                // ‖T‖ = 1 here, so the certified inequality is an equality.
                let excess = radius_excess(&t, Exponent::TWO, probe);
                prop_assert!(excess.abs() <= 1e-9, "excess {excess}");
            }
        }
    }

    #[test]
    fn primitive_powers_converge_to_the_ergodic_projection(dim in 3usize..10, count in 1usize..4, seed in 0u64..500) {
        let t = planted_product(dim, count, seed);
        let space = SpaceDescriptor::hilbert(dim);
        prop_assume!(spectral_report(&t, DEFAULT_BAND).unwrap().primitive);
        let rep = iterate(&t, &space, 100_000, 1e-12).unwrap();
        prop_assert!(rep.converged);
        let limit = rep.limit.unwrap();
        prop_assert!(rep.limit_idempotence.unwrap() <= 1e-8);
        prop_assert!(rep.limit_norm.unwrap() <= 1.0 + 1e-8);
        let e = ergodic_projection(&t, 1e-8).unwrap();
        prop_assert!(induced_norm(&(&limit - &e), Exponent::TWO) <= 1e-6);
    }

    #[test]
    fn halperin_estimate_dominates_samples(dim in 2usize..6, seed in 0u64..500) {
        let p = random_projection(dim, 1 + seed as usize % (dim - 1), seed);
        let space = SpaceDescriptor::hilbert(dim);
        let cfg = SamplingConfig::with_seed(seed).with_samples(500);
        let k = halperin_constant(&p, &space, &cfg).unwrap().value().unwrap();
        for i in 0..20 {
            let x = random_vector(dim, seed * 100 + i);
            let px = p.apply(&x);
            let num: f64 = x.iter().zip(&px).map(|(a, b)| (a - b).norm_sqr()).sum();
            let den = space.norm(&x).powi(2) - space.norm(&px).powi(2);
            prop_assert!(num <= k * den + 1e-9);
        }
    }
}

#[test]
fn moduli_are_monotone_in_epsilon() {
    let space = SpaceDescriptor::hilbert(5);
    let cfg = SamplingConfig::with_seed(9).with_samples(2000);
    for seed in 0..4 {
        let t = planted_product(5, 2, seed);
        for variant in [Variant::Phi, Variant::PhiTilde] {
            let values: Vec<f64> = [0.02, 0.05, 0.1, 0.2, 0.4]
                .iter()
                .map(|&e| apostol_phi(&t, &space, e, variant, &cfg).unwrap().value)
                .collect();
            for w in values.windows(2) {
                assert!(w[0] <= w[1] + 1e-3, "{variant:?}: {values:?}");
            }
        }
    }
}

#[test]
fn eigenvector_seeding_attains_boundary_points() {
    let space = SpaceDescriptor::hilbert(4);
    let cfg = SamplingConfig::with_seed(2).with_samples(500);
    let lambdas = [C64::from_polar(1.0, 2.5), C64::from_polar(1.0, -0.7)];
    let t = ComplexMatrix::from_diag(&[lambdas[0], lambdas[1], c(0.3), C64::new(0.0, 0.5)]);
    let est = apostol_phi(&t, &space, 1e-3, Variant::PhiTilde, &cfg).unwrap();
    for l in lambdas {
        assert!(est.value >= (l - c(1.0)).norm() - 1e-6);
    }
}

#[test]
fn hilbert_projections_have_small_omega() {
    let space = SpaceDescriptor::hilbert(6);
    let cfg = SamplingConfig::with_seed(4).with_samples(100_000);
    let p = random_projection(6, 3, 8);
    assert!(omega(&p, &space, &cfg).unwrap().extrapolated <= 0.05);
}

#[test]
fn nontrivial_operators_have_positive_moduli() {
    let cfg = SamplingConfig::with_seed(1).with_samples(1000);
    for p in [1.0, 1.5, 2.0, 4.0, f64::INFINITY] {
        let space = SpaceDescriptor::new(3, p).unwrap();
        let t = ComplexMatrix::from_diag(&[c(1.0), c(0.5), c(0.0)]);
        for eps in [0.1, 0.5] {
            assert!(apostol_phi(&t, &space, eps, Variant::Phi, &cfg).unwrap().value > 0.0);
        }
    }
}

#[test]
fn estimators_agree_across_execution_modes() {
    let space = SpaceDescriptor::new(4, 3.0).unwrap();
    let t = ComplexMatrix::from_diag(&[c(1.0), c(0.5), C64::from_polar(1.0, 1.0), c(0.0)]);
    let par = SamplingConfig::with_seed(6).with_samples(1500);
    let seq = par.sequential();
    let a = apostol_phi(&t, &space, 0.1, Variant::Phi, &par).unwrap();
    let b = apostol_phi(&t, &space, 0.1, Variant::Phi, &seq).unwrap();
    assert_eq!(a, b);
    let hs = SpaceDescriptor::hilbert(4);
    let t = planted_product(4, 2, 3);
    assert_eq!(
        halperin_constant(&t, &hs, &par).unwrap(),
        halperin_constant(&t, &hs, &seq).unwrap()
    );
}
