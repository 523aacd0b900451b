use criterion::{criterion_group, criterion_main, Criterion};
use ctxbell_bench::{banded_matrix, table_grid};
use std::hint::black_box;

fn bell(c: &mut Criterion) {
    let tables = table_grid(5);
    c.bench_function("bell_value_all_forms/625", |b| {
        b.iter(|| {
            tables
                .iter()
                .map(|t| ctxbell::bell_value_all_forms(black_box(t)))
                .sum::<f64>()
        })
    });
    c.bench_function("sweep_case_c/101", |b| {
        let grid: Vec<f64> = (0..=100).map(|i| i as f64 / 100.0).collect();
        b.iter(|| ctxbell::sweep_case_c(black_box(&grid)).unwrap())
    });
}

fn realizability(c: &mut Criterion) {
    let tables = table_grid(4);
    c.bench_function("realizable/256", |b| {
        b.iter(|| {
            tables
                .iter()
                .filter(|t| ctxbell::realizable(black_box(t)).is_feasible())
                .count()
        })
    });
}

fn semantic(c: &mut Criterion) {
    let m = banded_matrix(32);
    c.bench_function("svd_truncate/32x32/k8", |b| {
        b.iter(|| ctxbell::svd_truncate(black_box(&m), 8).unwrap())
    });
}

criterion_group!(benches, bell, realizability, semantic);
criterion_main!(benches);
