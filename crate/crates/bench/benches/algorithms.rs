use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use hamburn_core::adversary::{evade, evader_length, random_vertices, trial_rng};
use hamburn_core::experiments::{open_problem_search, SearchMode};
use hamburn_core::floatvar;
use hamburn_core::hamming::{burning_number, SearchLimits, DEFAULT_VERTEX_CAP};
use hamburn_core::{encode, CodeVector};

fn floatvar_run(c: &mut Criterion) {
    let mut group = c.benchmark_group("floatvar_run");
    for &(n, q) in &[(6, 3), (12, 3), (12, 5)] {
        let mut rng = trial_rng(1, 0);
        let a: Vec<CodeVector> = random_vertices(&mut rng, n, q, n)
            .iter()
            .map(encode)
            .collect();
        group.bench_with_input(
            BenchmarkId::from_parameter(format!("n{n}_q{q}")),
            &a,
            |b, a| b.iter(|| floatvar::run(black_box(a)).unwrap()),
        );
    }
    group.finish();
}

fn evader(c: &mut Criterion) {
    let (n, q) = (9, 3);
    let mut rng = trial_rng(2, 0);
    let vs = random_vertices(&mut rng, n, q, evader_length(n, q));
    c.bench_function("evade_n9_q3", |b| {
        b.iter(|| evade(black_box(&vs), n, q).unwrap())
    });
}

fn burning(c: &mut Criterion) {
    let mut group = c.benchmark_group("burning_number");
    group.sample_size(10);
    for &(n, q) in &[(5, 2), (3, 4), (4, 4)] {
        group.bench_function(format!("n{n}_q{q}"), |b| {
            b.iter(|| burning_number(n, q, SearchLimits::default()).unwrap())
        });
    }
    group.finish();
}

fn open_problem(c: &mut Criterion) {
    let mut group = c.benchmark_group("open_problem");
    group.sample_size(10);
    group.bench_function("k1_randomized_1000", |b| {
        b.iter(|| {
            open_problem_search(1, SearchMode::Randomized, Some(1000), 0, DEFAULT_VERTEX_CAP)
                .unwrap()
        })
    });
    group.finish();
}

criterion_group!(benches, floatvar_run, evader, burning, open_problem);
criterion_main!(benches);
