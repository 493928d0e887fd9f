use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use projlab::apostol::{apostol_phi, Variant};
use projlab::classes::halperin_constant;
use projlab::linalg::operator_norm;
use projlab::spaces::{make_projection, ProjectionSpec};
use projlab::{ComplexMatrix, Execution, SamplingConfig, SpaceDescriptor, C64};

fn projection(dim: usize) -> ComplexMatrix {
    let basis: Vec<Vec<C64>> = (0..dim / 2)
        .map(|k| (0..dim).map(|i| C64::new(((i * 7 + k * 3) % 5) as f64 - 2.0, 0.1 * (i + k) as f64)).collect())
        .collect();
    make_projection(&ProjectionSpec::hilbert_span(basis), &SpaceDescriptor::hilbert(dim)).unwrap()
}

fn modes() -> [(&'static str, Execution); 2] {
    [("parallel", Execution::Parallel), ("sequential", Execution::Sequential)]
}

fn bench_phi(c: &mut Criterion) {
    let mut group = c.benchmark_group("apostol_phi_tilde");
    group.sample_size(10);
    let p = projection(8);
    let space = SpaceDescriptor::hilbert(8);
    for (name, execution) in modes() {
        let cfg = SamplingConfig { execution, ..SamplingConfig::with_seed(1) };
        group.bench_with_input(BenchmarkId::from_parameter(name), &cfg, |b, cfg| {
            b.iter(|| apostol_phi(&p, &space, 0.05, Variant::PhiTilde, cfg).unwrap())
        });
    }
    group.finish();
}

fn bench_halperin(c: &mut Criterion) {
    let mut group = c.benchmark_group("halperin_constant");
    group.sample_size(10);
    let p = projection(8);
    let space = SpaceDescriptor::hilbert(8);
    for (name, execution) in modes() {
        let cfg = SamplingConfig { execution, ..SamplingConfig::with_seed(2) };
        group.bench_with_input(BenchmarkId::from_parameter(name), &cfg, |b, cfg| {
            b.iter(|| halperin_constant(&p, &space, cfg).unwrap())
        });
    }
    group.finish();
}

fn bench_norm(c: &mut Criterion) {
    // operator_norm always uses the default execution; compare it with the
    // exact p = 2 path as a baseline.
    let mut group = c.benchmark_group("operator_norm");
    let p = projection(8);
    for q in [2.0, 3.0] {
        let space = SpaceDescriptor::new(8, q).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(q), &space, |b, space| {
            b.iter(|| operator_norm(&p, space, 0).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, bench_phi, bench_halperin, bench_norm);
criterion_main!(benches);
