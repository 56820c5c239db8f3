use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use cmacc_bench::{isi_spec, tilted_allocation};
use cmacc_isi::{
    decompose, gaussian_mi_terms, optimize_weighted, rate_terms_discrete, rate_terms_integral,
    OptimizerConfig, RateWeights, SpectralAllocation,
};

fn bench_decompose(c: &mut Criterion) {
    let spec = isi_spec();
    let mut group = c.benchmark_group("decompose");
    for n in [64, 1024, 16384] {
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| decompose(black_box(&spec), n).unwrap())
        });
    }
    group.finish();
}

fn bench_rate_terms(c: &mut Criterion) {
    let spec = isi_spec();
    let mut group = c.benchmark_group("rate_terms");
    for n in [64, 1024, 16384] {
        let sub = decompose(&spec, n).unwrap();
        let alloc = tilted_allocation(n);
        group.bench_with_input(BenchmarkId::new("discrete", n), &n, |b, _| {
            b.iter(|| rate_terms_discrete(black_box(&sub), black_box(&alloc)).unwrap())
        });
    }
    let flat = SpectralAllocation::uniform(1.0, 1.5, 0.0, 0.0);
    group.bench_function("integral/4096", |b| {
        b.iter(|| rate_terms_integral(black_box(&spec), &flat, 4096).unwrap())
    });
    group.finish();
}

fn bench_oracle(c: &mut Criterion) {
    let spec = isi_spec();
    let mut group = c.benchmark_group("oracle");
    group.sample_size(10);
    for n in [8, 32, 64] {
        let alloc = tilted_allocation(n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| gaussian_mi_terms(black_box(&spec), n, &alloc).unwrap())
        });
    }
    group.finish();
}

fn bench_optimizer(c: &mut Criterion) {
    let spec = isi_spec();
    let sub = decompose(&spec, 32).unwrap();
    let cfg = OptimizerConfig {
        multistarts: 4,
        ..OptimizerConfig::default()
    };
    let weights = RateWeights::new(0.3, 1.0, 0.6);
    let mut group = c.benchmark_group("optimizer");
    group.sample_size(10);
    group.bench_function("weighted/n32", |b| {
        b.iter(|| optimize_weighted(&sub, spec.budgets(), black_box(&weights), &cfg).unwrap())
    });
    group.finish();
}

criterion_group!(benches, bench_decompose, bench_rate_terms, bench_oracle, bench_optimizer);
criterion_main!(benches);
