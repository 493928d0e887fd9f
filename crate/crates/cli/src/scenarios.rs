//! Builtin scenarios: ready-made configs reproducing the named results.

use std::path::PathBuf;

use projlab::linalg::C64;
use projlab::sampling::{gaussian_vector, rng_for};
use projlab::spaces::ProjectionSpec;
use projlab::{ComplexMatrix, SemigroupExpr, SpaceDescriptor};
use serde_json::json;

use crate::config::{CheckSpec, GeneratorSpec, RunConfig};
use crate::CliError;

pub const SCENARIOS: &[&str] = &["counterexample", "halperin", "lapidus", "decay-bounds", "moduli-chain", "range-formula"];

const GENERATOR_STREAM: u64 = 0x5ce7;

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// Euclidean projections onto random subspaces of the given ranks, all
/// containing one planted random vector.
pub fn planted_generators(dim: usize, ranks: &[usize], seed: u64) -> Vec<GeneratorSpec> {
    let planted = gaussian_vector(&mut rng_for(seed, GENERATOR_STREAM, 0), dim);
    ranks
        .iter()
        .enumerate()
        .map(|(k, &rank)| {
            let mut rng = rng_for(seed, GENERATOR_STREAM, k as u64 + 1);
            let mut basis = vec![planted.clone()];
            while basis.len() < rank {
                basis.push(gaussian_vector(&mut rng, dim));
            }
            GeneratorSpec::Projection(ProjectionSpec::hilbert_span(basis))
        })
        .collect()
}

fn matrix(m: ComplexMatrix) -> GeneratorSpec {
    GeneratorSpec::Matrix { matrix: m }
}

fn config(space: SpaceDescriptor, generators: Vec<GeneratorSpec>, expressions: Vec<SemigroupExpr>, checks: Vec<CheckSpec>, seed: u64, output: PathBuf) -> RunConfig {
    RunConfig { space, generators, expressions, checks, seed, output }
}

fn counterexample(seed: u64, output: PathBuf) -> RunConfig {
    let p1 = ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[-1.0, 0.0]]);
    let p2 = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 1.0]]);
    let checks = vec![
        CheckSpec::new("orthoprojection", json!({ "generators": [1, 2] })),
        CheckSpec::new("iterate", json!({ "expr": 0, "expect": "diverge", "n_max": 1000 })),
        CheckSpec::new("spectral", json!({ "expr": 0, "primitive": false, "amplitude": 2.0 })),
        CheckSpec::new("decay-bound", json!({ "expr": 0, "n_max": 1000 })),
    ];
    config(
        SpaceDescriptor::with_exponent(2, projlab::Exponent::INF).expect("valid space"),
        vec![matrix(p1), matrix(p2)],
        vec![SemigroupExpr::product_of(&[1, 2])],
        checks,
        seed,
        output,
    )
}

fn von_neumann(seed: u64, output: PathBuf, expr: SemigroupExpr) -> RunConfig {
    let checks = vec![
        CheckSpec::new("orthoprojection", json!({})),
        CheckSpec::new("iterate", json!({ "expr": 0, "expect": "converge" })),
        CheckSpec::new("range-formula", json!({ "expr": 0 })),
        CheckSpec::new("spectral", json!({ "expr": 0, "primitive": true })),
        CheckSpec::new("halperin", json!({ "generator": 1, "expect_min": 0.99, "expect_max": 1.0 + 1e-9 })),
    ];
    config(SpaceDescriptor::hilbert(6), planted_generators(6, &[4, 4, 3], seed), vec![expr], checks, seed, output)
}

fn decay_bounds(seed: u64, output: PathBuf) -> RunConfig {
    let thetas = [0.1, 0.3, 0.7];
    let mut generators: Vec<GeneratorSpec> = thetas
        .iter()
        .map(|&th| matrix(ComplexMatrix::from_diag(&[C64::from_polar(1.0, th), c(0.5), c(0.0)])))
        .collect();
    let e = |i: usize| {
        let mut v = vec![c(0.0); 3];
        v[i] = c(1.0);
        v
    };
    generators.push(GeneratorSpec::Projection(ProjectionSpec::hilbert_span(vec![e(0), e(1)])));
    generators.push(GeneratorSpec::Projection(ProjectionSpec::hilbert_span(vec![
        e(0),
        vec![c(0.0), c(1.0), c(1.0)],
    ])));
    let mut checks: Vec<CheckSpec> = (1..=thetas.len())
        .map(|k| CheckSpec::new("decay-bound", json!({ "generator": k, "n_max": 1000 })))
        .collect();
    checks.push(CheckSpec::new("amplitude-omega", json!({ "generator": 3 })));
    checks.push(CheckSpec::new("decay-bound", json!({ "expr": 0, "n_max": 100_000 })));
    checks.push(CheckSpec::new("iterate", json!({ "expr": 0, "expect": "converge" })));
    config(
        SpaceDescriptor::hilbert(3),
        generators,
        vec![SemigroupExpr::product_of(&[4, 5])],
        checks,
        seed,
        output,
    )
}

fn moduli_chain(seed: u64, output: PathBuf) -> Result<RunConfig, CliError> {
    let mut expressions = vec![SemigroupExpr::product_of(&[1, 2]), SemigroupExpr::convex_of(&[0.2, 0.3, 0.5])];
    for k in 0..3 {
        expressions.push(SemigroupExpr::random(3, 3, seed.wrapping_add(k)).map_err(|e| CliError::Config(e.to_string()))?);
    }
    let mut checks: Vec<CheckSpec> = (0..expressions.len())
        .map(|i| CheckSpec::new("modulus-chain", json!({ "expr": i, "epsilon": 0.1 })))
        .collect();
    checks.push(CheckSpec::new("composition-bounds", json!({ "generators": [1, 2], "epsilon": 0.05, "slack": 0.02 })));
    checks.push(CheckSpec::new("beta-bound", json!({ "generator": 1, "epsilon": 0.1 })));
    let bound = 0.2f64.sqrt();
    checks.push(CheckSpec::new(
        "phi",
        json!({ "generator": 1, "epsilon": 0.1, "expect_min": 0.9 * bound, "expect_max": bound + 1e-9 }),
    ));
    Ok(config(SpaceDescriptor::hilbert(4), planted_generators(4, &[2, 2, 3], seed), expressions, checks, seed, output))
}

fn range_formula(seed: u64, output: PathBuf) -> Result<RunConfig, CliError> {
    let mut expressions = vec![SemigroupExpr::product_of(&[1, 2, 3, 4])];
    for k in 0..4 {
        expressions.push(SemigroupExpr::random(4, 3, seed.wrapping_add(k)).map_err(|e| CliError::Config(e.to_string()))?);
    }
    let checks = (0..expressions.len()).map(|i| CheckSpec::new("range-formula", json!({ "expr": i }))).collect();
    Ok(config(SpaceDescriptor::hilbert(5), planted_generators(5, &[3, 3, 4, 2], seed), expressions, checks, seed, output))
}

/// The config of a builtin scenario.
pub fn scenario_config(name: &str, seed: u64, output: PathBuf) -> Result<RunConfig, CliError> {
    Ok(match name {
        "counterexample" => counterexample(seed, output),
        "halperin" => von_neumann(seed, output, SemigroupExpr::product_of(&[1, 2, 3])),
        "lapidus" => von_neumann(seed, output, SemigroupExpr::convex_of(&[0.2, 0.3, 0.5])),
        "decay-bounds" => decay_bounds(seed, output),
        "moduli-chain" => moduli_chain(seed, output)?,
        "range-formula" => range_formula(seed, output)?,
        other => {
            return Err(CliError::Config(format!("unknown scenario {other:?}; known: {}", SCENARIOS.join(", "))));
        }
    })
}
