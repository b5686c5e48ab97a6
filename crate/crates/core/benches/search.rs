//! Search throughput with the rayon pool against a single thread.
//!
//! With the `parallel` feature the comparison is the default pool against a
//! one-thread pool; without it (`--no-default-features`) both rows run the
//! sequential fallback.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use periodica::projection::tridiagram_from_net;
use periodica::search::{crossing_bound, untangle_bfs};
use periodica::{load_net, parse_diagram, SimplifyBudget, SquareDiagram, Tridiagram};

fn data(rel: &str) -> String {
    std::fs::read_to_string(format!("{}/data/{rel}", env!("CARGO_MANIFEST_DIR"))).unwrap()
}

fn srs() -> Tridiagram {
    tridiagram_from_net(&load_net(&data("nets/srs.net")).unwrap(), 7).unwrap()
}

fn hopf() -> SquareDiagram {
    parse_diagram(&data("diagrams/hopf.pdg")).unwrap()
}

fn pools() -> Vec<(&'static str, rayon::ThreadPool)> {
    let one = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap();
    let all = rayon::ThreadPoolBuilder::new().build().unwrap();
    let label = if periodica::parallel::PARALLEL {
        "parallel"
    } else {
        "sequential-fallback"
    };
    vec![("sequential", one), (label, all)]
}

fn bench(c: &mut Criterion) {
    let budget = SimplifyBudget::default();
    let (t, d) = (srs(), hopf());
    let mut g = c.benchmark_group("search");
    g.sample_size(10);
    for (name, pool) in pools() {
        g.bench_function(BenchmarkId::new("crossing_bound/srs", name), |b| {
            b.iter(|| pool.install(|| crossing_bound(&t, &budget).unwrap()))
        });
        g.bench_function(BenchmarkId::new("untangle_bfs/hopf", name), |b| {
            b.iter(|| pool.install(|| untangle_bfs(&d, 2, &budget).unwrap()))
        });
    }
    g.finish();
}

criterion_group!(benches, bench);
criterion_main!(benches);
