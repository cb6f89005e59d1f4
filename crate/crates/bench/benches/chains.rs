use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use schubert_core::audit::run_audit;
use schubert_core::chains::{enumerate_chains, grothendieck_via_chains, nested_chain, staircase_chain};
use schubert_core::statistics::lex_last_lis;
use schubert_core::{EnumerationGuard, Permutation};

fn enumeration(c: &mut Criterion) {
    let guard = EnumerationGuard::default();
    let w: Permutation = "256341".parse().unwrap();
    c.bench_function("enumerate chains 256341", |b| b.iter(|| enumerate_chains(black_box(&w), guard).unwrap()));
    let id = Permutation::identity(6);
    c.bench_function("grothendieck via chains 123456", |b| {
        b.iter(|| grothendieck_via_chains(black_box(&id), guard).unwrap())
    });
    let mut group = c.benchmark_group("sweep");
    group.sample_size(10);
    group.bench_function("all chains of S5", |b| {
        b.iter(|| {
            Permutation::all(5)
                .map(|w| enumerate_chains(&w, guard).unwrap().len())
                .sum::<usize>()
        })
    });
    group.finish();
}

fn constructions(c: &mut Criterion) {
    let w: Permutation = "48513726".parse().unwrap();
    c.bench_function("lex_last_lis 48513726", |b| {
        b.iter(|| (1..=8).map(|q| lex_last_lis(black_box(&w), q).unwrap().len()).sum::<usize>())
    });
    c.bench_function("nested chain 48513726", |b| b.iter(|| nested_chain(black_box(&w))));
    c.bench_function("staircase chain 48513726", |b| b.iter(|| staircase_chain(black_box(&w))));
    let chain = nested_chain(&w);
    c.bench_function("audit nested chain 48513726", |b| b.iter(|| run_audit(black_box(&chain))));
}

criterion_group!(benches, enumeration, constructions);
criterion_main!(benches);
