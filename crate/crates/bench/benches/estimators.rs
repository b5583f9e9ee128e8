use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use quermass_core::kubota::kubota_check;
use quermass_core::poly::symbolic_suite;
use quermass_core::quermass::quermass_mc_steiner;
use quermass_core::sampling::generate;
use quermass_core::{BodySpec, Family, McOptions};

fn mc_steiner(c: &mut Criterion) {
    let mut group = c.benchmark_group("mc_steiner");
    group.sample_size(10);
    for dim in [3, 4] {
        let body = generate(&BodySpec::new(dim, Family::RandomCore, 3)).unwrap();
        let opts = McOptions::new(100_000, 1);
        group.bench_function(format!("d{dim}_1e5"), |b| {
            b.iter(|| quermass_mc_steiner(black_box(&body), &opts).unwrap())
        });
    }
    group.finish();
}

fn kubota(c: &mut Criterion) {
    let mut group = c.benchmark_group("kubota");
    group.sample_size(10);
    let body = generate(&BodySpec::new(3, Family::RandomCore, 5)).unwrap();
    let mc = McOptions::default();
    group.bench_function("d3_k1_j0_r100", |b| {
        b.iter(|| kubota_check(black_box(&body), 1, 0, 100, 9, &mc).unwrap())
    });
    group.finish();
}

fn symbolic(c: &mut Criterion) {
    let mut group = c.benchmark_group("symbolic");
    group.sample_size(10);
    group.bench_function("n64", |b| b.iter(|| symbolic_suite(black_box(64))));
    group.finish();
}

criterion_group!(benches, mc_steiner, kubota, symbolic);
criterion_main!(benches);
