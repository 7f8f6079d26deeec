//! Benchmarks for the hot numeric kernels: the dense symmetric eigensolver,
//! ensemble sampling, the one-dimensional bound optimizer, and a small
//! end-to-end Monte Carlo tail run.

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use std::hint::black_box;

use matrix_tails::bounds::mgf::master_tail_numeric;
use matrix_tails::ensembles::{sample_batch, EnsembleSpec};
use matrix_tails::verify::quadrature::{GaussHermite, GH_NODES};
use matrix_tails::verify::{monte_carlo_tail, Statistic};
use matrix_tails::{KeyedStream, MgfKind, MgfModel, SymMatrix};

fn random_sym(dim: usize, seed: u64) -> SymMatrix {
    let mut s = KeyedStream::new(seed, 0, 0);
    SymMatrix::from_fn(dim, |_, _| s.standard_normal())
}

fn bench_eigen(c: &mut Criterion) {
    let mut group = c.benchmark_group("eigen");
    for dim in [8usize, 32, 64] {
        let m = random_sym(dim, dim as u64);
        group.bench_function(format!("jacobi-d{dim}"), |b| {
            b.iter_batched(|| m.clone(), |m| black_box(m.eigen()), BatchSize::SmallInput)
        });
    }
    group.finish();
}

fn bench_sampling(c: &mut Criterion) {
    let mut group = c.benchmark_group("sampling");
    let goe = EnsembleSpec::Goe { dim: 32 };
    group.bench_function("goe-d32-batch100", |b| {
        let mut start = 0u64;
        b.iter(|| {
            let batch = sample_batch(&goe, 7, start, 100).unwrap();
            start += 100;
            black_box(batch.realizations.len())
        })
    });
    let coupon = EnsembleSpec::Coupon { dim: 8, n_summands: 8 };
    group.bench_function("coupon-d8-batch1000", |b| {
        let mut start = 0u64;
        b.iter(|| {
            let batch = sample_batch(&coupon, 7, start, 1000).unwrap();
            start += 1000;
            black_box(batch.realizations.len())
        })
    });
    group.finish();
}

fn bench_master_optimizer(c: &mut Criterion) {
    let models = vec![
        MgfModel::new(MgfKind::Gaussian, SymMatrix::scaled_identity(8, 0.6)).unwrap(),
        MgfModel::new(MgfKind::BernsteinBounded, random_sym(8, 3).square()).unwrap(),
    ];
    c.bench_function("master-optimize-d8", |b| {
        b.iter(|| black_box(master_tail_numeric(&models, 2.5, 8).unwrap()))
    });
}

fn bench_quadrature(c: &mut Criterion) {
    let gh = GaussHermite::new(GH_NODES);
    let a = random_sym(16, 11).scale(0.25);
    c.bench_function("gauss-hermite-matrix-mgf-d16", |b| {
        b.iter(|| black_box(gh.gaussian_matrix_mgf(&a, 1.0)))
    });
}

fn bench_tail_pipeline(c: &mut Criterion) {
    let spec = EnsembleSpec::DiagGaussian { dim: 8 };
    let grid: Vec<f64> = (0..16).map(|i| i as f64 * 0.25).collect();
    c.bench_function("monte-carlo-tail-diag8-2000", |b| {
        b.iter(|| {
            black_box(monte_carlo_tail(&spec, Statistic::SpectralNorm, &grid, 2000, 5).unwrap())
        })
    });
}

criterion_group!(
    benches,
    bench_eigen,
    bench_sampling,
    bench_master_optimizer,
    bench_quadrature,
    bench_tail_pipeline
);
criterion_main!(benches);
