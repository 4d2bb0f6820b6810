use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use nmq_bench::{strong_jc, super_ohmic};
use nmq_core::measures::{choi_g, ChoiReference, DEFAULT_EPS_SCHEDULE};
use nmq_core::{
    analyze, solve_g, AnalysisOptions, CorrelationKernel, Generator, SpectralDensityModel,
    TimeGrid,
};

fn volterra(c: &mut Criterion) {
    let model = SpectralDensityModel::lorentzian(10.0, 1.0, 0.0).unwrap();
    let kernel = CorrelationKernel::from_model(&model).unwrap();
    let mut group = c.benchmark_group("solve_g");
    group.sample_size(10);
    for steps in [1_000usize, 4_000, 16_000] {
        let grid = TimeGrid::new(steps as f64 * 1e-3, 1e-3).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(steps), &grid, |b, grid| {
            b.iter(|| solve_g(&kernel, black_box(grid)).unwrap())
        });
    }
    group.finish();
}

fn dephasing(c: &mut Criterion) {
    let mut group = c.benchmark_group("dephasing_trace");
    group.sample_size(10);
    group.bench_function("s3_1000_points", |b| b.iter(|| super_ohmic(black_box(10.0), 1e-2)));
    group.finish();
}

fn choi(c: &mut Criterion) {
    let gen = Generator::JaynesCummings { gamma: -0.3, shift: 0.2 };
    c.bench_function("choi_g", |b| {
        b.iter(|| choi_g(black_box(&gen), &DEFAULT_EPS_SCHEDULE, ChoiReference::Standard).unwrap())
    });
}

fn measures(c: &mut Criterion) {
    let trace = strong_jc(10.0, 1e-3);
    let mut group = c.benchmark_group("analyze");
    group.sample_size(10);
    group.bench_function("jc_strong_10k", |b| {
        b.iter(|| analyze(black_box(&trace), &AnalysisOptions::default()).unwrap())
    });
    group.finish();
}

criterion_group!(benches, volterra, dephasing, choi, measures);
criterion_main!(benches);
