use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use holocenter::{check_isochronous, classify, enumerate_centers, VerifyConfig};
use holocenter_bench::{dense_series, imaginary_triple, nonresonant_bb, poincare, resonant_pair};
use std::hint::black_box;

fn series_arithmetic(c: &mut Criterion) {
    let mut group = c.benchmark_group("series_mul");
    for order in [6, 9, 12] {
        let s = dense_series(order);
        group.bench_with_input(BenchmarkId::from_parameter(order), &s, |b, s| {
            b.iter(|| black_box(s * s))
        });
    }
    group.finish();
    let s = dense_series(8);
    c.bench_function("series_inverse_8", |b| b.iter(|| black_box(&s).inverse().unwrap()));
}

fn bb_solver(c: &mut Criterion) {
    let mut group = c.benchmark_group("bb_classify");
    for order in [8, 12, 16] {
        let bb = nonresonant_bb(order);
        group.bench_with_input(BenchmarkId::from_parameter(order), &bb, |b, bb| {
            b.iter(|| classify(black_box(bb), order).unwrap())
        });
    }
    group.finish();
}

fn enumeration(c: &mut Criterion) {
    let mut group = c.benchmark_group("enumerate_centers");
    group.sample_size(20);
    for (name, h) in [
        ("resonant_pair", resonant_pair()),
        ("imaginary_triple", imaginary_triple()),
    ] {
        for order in [8, 12] {
            group.bench_with_input(BenchmarkId::new(name, order), &h, |b, h| {
                b.iter(|| enumerate_centers(black_box(h), order).unwrap())
            });
        }
    }
    group.finish();
}

fn verification(c: &mut Criterion) {
    let h = poincare();
    let report = enumerate_centers(&h, 8).unwrap().remove(0);
    let cfg = VerifyConfig::default();
    let mut group = c.benchmark_group("verify");
    group.sample_size(10);
    group.bench_function("poincare_20_starts", |b| {
        b.iter(|| check_isochronous(&h, black_box(&report), &cfg).unwrap())
    });
    group.finish();
}

criterion_group!(benches, series_arithmetic, bb_solver, enumeration, verification);
criterion_main!(benches);
