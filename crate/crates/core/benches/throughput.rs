//! Parallel against sequential throughput of the path batches and the exact
//! sampler. The sequential side runs the same code inside a one-thread pool.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use ising_peel::algebra::rat;
use ising_peel::laws::Regime;
use ising_peel::map::sample_finite_map;
use ising_peel::par;
use ising_peel::sim::{batch_run, BatchConfig, LawProvider, RngStream, RunOptions, StoppingSpec};
use ising_peel::tutte::build_evaluated_table;

fn pools() -> Vec<(&'static str, rayon::ThreadPool)> {
    let all = rayon::current_num_threads();
    let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let many = rayon::ThreadPoolBuilder::new().num_threads(all).build().unwrap();
    vec![("sequential", one), ("parallel", many)]
}

fn paths(c: &mut Criterion) {
    let laws = LawProvider::shared().unwrap();
    let mut g = c.benchmark_group("batch_run");
    g.sample_size(10);
    let cases = [
        ("fullplane_1e4_steps", BatchConfig { init: Regime::Fullplane, stopping: StoppingSpec::FixedSteps(10_000), options: RunOptions::default() }),
        ("halfplane_p200_t5", BatchConfig { init: Regime::Halfplane { p: 200 }, stopping: StoppingSpec::HitLevel(5), options: RunOptions::default() }),
    ];
    for (name, cfg) in &cases {
        for (mode, pool) in pools() {
            g.bench_with_input(BenchmarkId::new(*name, mode), cfg, |b, cfg| {
                b.iter(|| pool.install(|| batch_run(cfg, &laws, 64, 1).unwrap()))
            });
        }
    }
    g.finish();
}

fn maps(c: &mut Criterion) {
    let table = build_evaluated_table(40, 8, rat(2, 1)).unwrap();
    let mut g = c.benchmark_group("sample_finite_map");
    g.sample_size(10);
    for (mode, pool) in pools() {
        g.bench_function(BenchmarkId::new("p3_q3_n40_x32", mode), |b| {
            b.iter(|| {
                pool.install(|| {
                    par::map_range(32, |i| {
                        let mut rng = RngStream::new(9, i as u64).rng();
                        sample_finite_map(3, 3, 40, &table, &mut rng).unwrap()
                    })
                })
            })
        });
    }
    g.finish();
}

criterion_group!(benches, paths, maps);
criterion_main!(benches);
