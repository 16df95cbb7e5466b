use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use fomc_bench::chain;
use fomc_core::{evaluate, Assignment, Engine};

fn chain_engines(c: &mut Criterion) {
    let mut group = c.benchmark_group("chain");
    for k in [4, 8, 16] {
        let (a, phi) = chain(k, 4);
        for engine in [Engine::Brute, Engine::BottomUp, Engine::Dnc] {
            group.bench_with_input(BenchmarkId::new(engine.name(), k), &k, |b, _| {
                b.iter(|| evaluate(&phi, &a, engine, &Assignment::new()).unwrap().answer)
            });
        }
    }
    group.finish();
}

criterion_group!(benches, chain_engines);
criterion_main!(benches);
