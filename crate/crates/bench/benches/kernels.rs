use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use epd_bench::{config, dataset, phantom, shell, smooth};
use epd_core::darboux::{apply_q, epd_solve};
use epd_core::harmonics::decompose;
use epd_core::reconstruct::{k_profile, reconstruct_field};
use epd_core::transform::generate_dataset;
use epd_core::AngularSampleSet;

fn bench_decompose(c: &mut Criterion) {
    let f = phantom();
    let radii: Vec<f64> = (1..=256).map(|i| 3.0 * i as f64 / 256.0).collect();
    let set = AngularSampleSet::new(2, 32).unwrap();
    c.bench_function("decompose 256 radii M=8", |b| {
        b.iter(|| decompose(black_box(&f), &radii, 8, &set).unwrap())
    });
}

fn bench_apply_q(c: &mut Criterion) {
    let mut group = c.benchmark_group("apply_q 2048 nodes");
    for m in [1, 4, 8] {
        let u = smooth(m, 2048);
        group.bench_with_input(BenchmarkId::from_parameter(m), &m, |b, &m| {
            b.iter(|| apply_q(2, m, black_box(&u)).unwrap())
        });
    }
    group.finish();
}

fn bench_k_profile(c: &mut Criterion) {
    let g0 = smooth(0, 513);
    c.bench_function("k_profile m=4 513 nodes", |b| {
        b.iter(|| k_profile(2, 4, black_box(&g0)).unwrap())
    });
}

fn bench_epd_solve(c: &mut Criterion) {
    let mut group = c.benchmark_group("epd_solve T=3");
    group.sample_size(20);
    for nodes in [257, 513] {
        let f = shell(2, nodes);
        group.bench_with_input(BenchmarkId::from_parameter(nodes), &f, |b, f| {
            b.iter(|| epd_solve(2, 2, black_box(f), 3.0, 0.9).unwrap())
        });
    }
    group.finish();
}

fn bench_forward(c: &mut Criterion) {
    let cfg = config();
    let f = phantom();
    let sampling = cfg.sampling().unwrap();
    let mut group = c.benchmark_group("pipeline");
    group.sample_size(10);
    group.bench_function("generate_dataset", |b| {
        b.iter(|| {
            generate_dataset(black_box(&f), &cfg.geometry, &sampling, cfg.quad_order).unwrap()
        })
    });
    let data = dataset(&cfg);
    group.bench_function("reconstruct_field", |b| {
        b.iter(|| reconstruct_field(black_box(&data), &f, &cfg).unwrap())
    });
    group.finish();
}

criterion_group!(
    benches,
    bench_decompose,
    bench_apply_q,
    bench_k_profile,
    bench_epd_solve,
    bench_forward
);
criterion_main!(benches);
