use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use taut_bench::{LARGE, SMALL};
use taut_core::lamination::census_rows;
use taut_core::treepoly::{census_explicit, census_trees_rows, DEFAULT_TREE_BUDGET};
use taut_core::words::{beta_closed_form, count_one_unbordered_recursive};

fn lamination(c: &mut Criterion) {
    let mut group = c.benchmark_group("lamination");
    group.sample_size(10);
    for w in SMALL.iter().chain(&LARGE) {
        group.bench_with_input(BenchmarkId::from_parameter(w.label()), w, |b, w| {
            b.iter(|| census_rows(black_box(w.q), w.n).unwrap())
        });
    }
    group.finish();
}

fn trees(c: &mut Criterion) {
    let mut group = c.benchmark_group("gamma_walk");
    for w in SMALL.iter().chain(&LARGE) {
        group.bench_with_input(BenchmarkId::from_parameter(w.label()), w, |b, w| {
            b.iter(|| census_trees_rows(black_box(w.q), w.n, 1).unwrap())
        });
    }
    group.finish();

    let mut group = c.benchmark_group("explicit_trees");
    group.sample_size(10);
    for w in &SMALL {
        group.bench_with_input(BenchmarkId::from_parameter(w.label()), w, |b, w| {
            b.iter(|| census_explicit(black_box(w.q), w.n, DEFAULT_TREE_BUDGET).unwrap())
        });
    }
    group.finish();
}

fn words(c: &mut Criterion) {
    let mut group = c.benchmark_group("words");
    for n in [100usize, 1000] {
        group.bench_with_input(BenchmarkId::new("recursion", n), &n, |b, &n| {
            b.iter(|| count_one_unbordered_recursive(black_box(3), n).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("closed_form", n), &n, |b, &n| {
            b.iter(|| beta_closed_form(black_box(3), n).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, lamination, trees, words);
criterion_main!(benches);
