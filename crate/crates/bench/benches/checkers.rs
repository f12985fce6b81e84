use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use locality_bench::random_magmas;
use locality_core::check::check_polar_closure_subsets;
use locality_core::predicate::{coprime_magma, sampled_classify};
use locality_core::{classify, classify_flags, is_locality_semigroup, verify_free_property, ElementId, Quiver};

fn classification(c: &mut Criterion) {
    let mut group = c.benchmark_group("classify");
    for n in [3, 5, 8] {
        let magmas = random_magmas(n, 64);
        group.bench_with_input(BenchmarkId::new("full", n), &magmas, |b, ms| {
            b.iter(|| ms.iter().for_each(|m| drop(black_box(classify(m)))))
        });
        group.bench_with_input(BenchmarkId::new("flags", n), &magmas, |b, ms| {
            b.iter(|| {
                ms.iter().for_each(|m| {
                    black_box(classify_flags(m));
                })
            })
        });
    }
    group.finish();
}

fn polar_reduction(c: &mut Criterion) {
    let magmas = random_magmas(8, 16);
    let mut group = c.benchmark_group("polar_closure");
    group.bench_function("singleton", |b| {
        b.iter(|| {
            magmas
                .iter()
                .filter(|m| is_locality_semigroup(black_box(*m)).holds())
                .count()
        })
    });
    group.bench_function("all_subsets", |b| {
        b.iter(|| {
            magmas
                .iter()
                .filter(|m| check_polar_closure_subsets(black_box(*m)).unwrap().is_none())
                .count()
        })
    });
    group.finish();
}

fn coprime_slices(c: &mut Criterion) {
    let p = coprime_magma();
    let mut group = c.benchmark_group("coprime_slice");
    group.sample_size(10);
    for bound in [12, 30, 60] {
        group.bench_with_input(BenchmarkId::from_parameter(bound), &bound, |b, &bound| {
            b.iter(|| sampled_classify(&p, black_box(bound)).unwrap())
        });
    }
    group.finish();
}

fn free_property(c: &mut Criterion) {
    let q: Quiver = "vertices: v\narrow: gamma v v\n".parse().unwrap();
    let z3 = locality_core::fixtures::magma("z3").unwrap();
    let f = [(ElementId::from("gamma"), ElementId::from("1"))].into_iter().collect();
    c.bench_function("free_property_loop_len8", |b| {
        b.iter(|| verify_free_property(&q, &z3, black_box(&f), 8).unwrap())
    });
}

criterion_group!(benches, classification, polar_reduction, coprime_slices, free_property);
criterion_main!(benches);
