use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use pbe_core::algebra::parse_algebra;
use pbe_core::ds::enumerate_ds;
use pbe_core::finder::{enumerate_models, SearchConstraints};
use pbe_core::meta::verify_meta_theorems;
use pbe_core::operators::{enumerate_operators, OperatorKind};
use pbe_core::Exec;

const PBE6: &str = include_str!("../../../fixtures/algebras/pbe6.alg");

fn modes() -> [(&'static str, Exec); 2] {
    [
        ("sequential", Exec::Sequential),
        ("parallel", Exec::Parallel),
    ]
}

fn bench(c: &mut Criterion) {
    let mut g = c.benchmark_group("models");
    for (label, exec) in modes() {
        g.bench_with_input(BenchmarkId::new("enumerate_4", label), &exec, |b, &e| {
            b.iter(|| enumerate_models(&SearchConstraints::new(4), e).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("meta_3", label), &exec, |b, &e| {
            b.iter(|| verify_meta_theorems(3, e).unwrap())
        });
    }
    g.finish();

    let a = parse_algebra(PBE6).unwrap();
    let mut g = c.benchmark_group("six_elements");
    for (label, exec) in modes() {
        g.bench_with_input(
            BenchmarkId::new("deductive_systems", label),
            &exec,
            |b, &e| b.iter(|| enumerate_ds(&a, e).unwrap()),
        );
        g.bench_with_input(BenchmarkId::new("smo", label), &exec, |b, &e| {
            b.iter(|| enumerate_operators(&a, OperatorKind::Smo, false, e).unwrap())
        });
    }
    g.finish();
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = bench
}
criterion_main!(benches);
