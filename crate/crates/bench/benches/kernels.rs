use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use qmc_anova::{l2_discrepancy, linf_discrepancy, lp_discrepancy, wce, PStar};
use qmc_anova_bench::{hammersley, product_weights, random};

fn discrepancies(c: &mut Criterion) {
    let mut g = c.benchmark_group("discrepancy");
    for m in [6usize, 8, 10] {
        let p = hammersley(m);
        g.bench_with_input(BenchmarkId::new("l2", m), &p, |b, p| b.iter(|| l2_discrepancy(black_box(p))));
        g.bench_with_input(BenchmarkId::new("linf", m), &p, |b, p| {
            b.iter(|| linf_discrepancy(black_box(p)).unwrap())
        });
    }
    let p = hammersley(6);
    g.bench_function("lp3/6", |b| b.iter(|| lp_discrepancy(black_box(&p), PStar::Finite(3.0), 1e-9).unwrap()));
    g.finish();
}

fn worst_case_errors(c: &mut Criterion) {
    let mut g = c.benchmark_group("wce");
    g.sample_size(10);
    let w2 = product_weights(2);
    for m in [6usize, 8] {
        let p = hammersley(m);
        g.bench_with_input(BenchmarkId::new("p2", m), &p, |b, p| {
            b.iter(|| wce(black_box(p), &w2, PStar::Finite(2.0), 1e-9).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("inf", m), &p, |b, p| {
            b.iter(|| wce(black_box(p), &w2, PStar::Infinity, 1e-9).unwrap())
        });
    }
    let p = hammersley(5);
    g.bench_function("p1.5/5", |b| b.iter(|| wce(black_box(&p), &w2, PStar::Finite(1.5), 1e-9).unwrap()));
    let p3 = random(3, 8);
    let w3 = product_weights(3);
    g.bench_function("p3/random-3d", |b| b.iter(|| wce(black_box(&p3), &w3, PStar::Finite(3.0), 1e-8).unwrap()));
    g.finish();
}

criterion_group!(benches, discrepancies, worst_case_errors);
criterion_main!(benches);
