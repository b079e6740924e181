//! The same workloads on a one-thread pool and on the full pool. Building
//! with `--no-default-features` swaps the pool for plain iterators.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use tracealg::eval::GenericMatrixSpec;
use tracealg::generators::GeneratorTable;
use tracealg::identities::fundamental_identity_n;
use tracealg::presentation::{minimal_generators, RelationEngine};
use tracealg::reduction::{solve_reduction, ColumnOrder, Reducer};
use tracealg::words::parse_tuple;

#[cfg(feature = "parallel")]
fn pools() -> Vec<(&'static str, rayon::ThreadPool)> {
    let all = rayon::current_num_threads();
    vec![
        ("sequential", rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap()),
        ("parallel", rayon::ThreadPoolBuilder::new().num_threads(all).build().unwrap()),
    ]
}

#[cfg(feature = "parallel")]
fn run<R: Send>(pool: &rayon::ThreadPool, f: impl FnOnce() -> R + Send) -> R {
    pool.install(f)
}

#[cfg(not(feature = "parallel"))]
fn pools() -> Vec<(&'static str, ())> {
    vec![("sequential", ())]
}

#[cfg(not(feature = "parallel"))]
fn run<R: Send>(_: &(), f: impl FnOnce() -> R + Send) -> R {
    f()
}

fn benches(c: &mut Criterion) {
    let mut group = c.benchmark_group("parallel_vs_sequential");
    group.sample_size(10);
    let tuple = parse_tuple("(11232,123,123,3)", 3).unwrap();
    let rule = solve_reduction(3, ColumnOrder::BreadthFirst).unwrap();
    for (name, pool) in pools() {
        group.bench_with_input(BenchmarkId::new("identity_n3_deg12", name), &tuple, |b, t| {
            b.iter(|| run(&pool, || fundamental_identity_n(3, t).unwrap()))
        });
        group.bench_function(BenchmarkId::new("generators_33", name), |b| {
            b.iter(|| run(&pool, || minimal_generators(3, 3, &GenericMatrixSpec::traceless(3, 3), 6).unwrap()))
        });
        group.bench_function(BenchmarkId::new("relations_23_deg6", name), |b| {
            let gens = minimal_generators(2, 3, &GenericMatrixSpec::traceless(2, 3), 3).unwrap();
            b.iter(|| run(&pool, || RelationEngine::new(gens.clone()).unwrap().minimal_relations(6).unwrap()))
        });
        group.bench_with_input(BenchmarkId::new("reduce_relation_deg10", name), &rule, |b, rule| {
            let t = parse_tuple("(123212,21,1,3)", 3).unwrap();
            b.iter(|| {
                let reducer = Reducer::new(rule.clone(), GeneratorTable::c33()).unwrap();
                run(&pool, || reducer.apply(&fundamental_identity_n(3, &t).unwrap()).unwrap())
            })
        });
    }
    group.finish();
}

criterion_group!(parallel_vs_sequential, benches);
criterion_main!(parallel_vs_sequential);
