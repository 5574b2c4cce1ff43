use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use lgx_bench::{dataset, explanations};
use lgx_core::global::{cover_class, explanation_list, greedy_cover, MaskIndex};
use lgx_core::search::{beam_search, exact_complete_explanation};
use lgx_core::verify::random_cover_problem;
use lgx_core::{ClassId, SearchConfig};

fn search(c: &mut Criterion) {
    let mut group = c.benchmark_group("search");
    for k in [6, 9, 12] {
        let (instances, model) = dataset(4, k, 1);
        let x = instances.iter().max_by_key(|x| x.objects().len()).unwrap();
        let class = x.predicted_class();
        let size = x.objects().len();
        group.bench_with_input(BenchmarkId::new("beam_default", size), x, |b, x| {
            b.iter(|| beam_search(&model, black_box(x), class, &SearchConfig::default()).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("beam_exhaustive", size), x, |b, x| {
            b.iter(|| beam_search(&model, black_box(x), class, &SearchConfig::exhaustive(size, 0.95)).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("exact", size), x, |b, x| {
            b.iter(|| exact_complete_explanation(&model, black_box(x), class, 0.95, 15).unwrap())
        });
    }
    group.finish();
}

fn global(c: &mut Criterion) {
    let (support, map) = random_cover_problem(3, 20, 30);
    c.bench_function("greedy_cover/random_20_masks", |b| {
        b.iter(|| greedy_cover(ClassId(0), black_box(&support), black_box(&map)))
    });

    let (instances, model) = dataset(50, 8, 2);
    let es = explanations(&instances, &model);
    c.bench_function("greedy_cover/class_0_of_250", |b| b.iter(|| cover_class(ClassId(0), black_box(&es))));
    c.bench_function("explanation_list/250", |b| b.iter(|| explanation_list(&MaskIndex::new(black_box(&es)))));
}

criterion_group!(benches, search, global);
criterion_main!(benches);
