//! Benchmarks of the symbolic engine: canonicalization of deep products,
//! the second horizontal differential, and a full suite evaluation.

use criterion::{criterion_group, criterion_main, Criterion};
use fsforms::{Engine, SuiteRegistry};
use std::hint::black_box;

fn canonicalize_deep_product(c: &mut Criterion) {
    let engine = Engine::standard();
    // A scalar-valued sum of traced words with nested brackets and both
    // differentials: representative of the largest expressions the corner
    // chain produces.
    let expr = engine
        .parse(
            "intS(tr(dH(E) * dH(A)) + tr(E * dH(dH(A))) \
             - tr(bracket(delta(A), w) * E) + tr(delta(E) * delta(A)))",
        )
        .expect("benchmark expression parses");
    c.bench_function("canonicalize corner-sized sum", |b| {
        b.iter(|| black_box(&expr).canonicalize())
    });
}

fn second_horizontal_differential(c: &mut Criterion) {
    let engine = Engine::standard();
    let e = engine.parse("E").unwrap();
    c.bench_function("dH(dH(E))", |b| {
        b.iter(|| {
            let once = engine.delta_h(black_box(&e)).unwrap();
            engine.delta_h(&once).unwrap()
        })
    });
}

fn run_core_suite(c: &mut Criterion) {
    let engine = Engine::standard();
    let registry = SuiteRegistry::builtin().unwrap();
    c.bench_function("run ym-core suite", |b| {
        b.iter(|| registry.run(black_box(&engine), "ym-core").unwrap())
    });
}

criterion_group!(
    benches,
    canonicalize_deep_product,
    second_horizontal_differential,
    run_core_suite
);
criterion_main!(benches);
