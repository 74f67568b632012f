use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use secs_bench::bench_graph;
use secs_core::{run_query, sample_queries, Algorithm, QuerySpec, SearchOptions};

fn bench_algorithms(c: &mut Criterion) {
    let g = bench_graph();
    let (queries, _) = sample_queries(&g, 3, 2, 11, true);
    let opts = SearchOptions::default();

    let mut group = c.benchmark_group("query");
    group.sample_size(10);
    for algorithm in Algorithm::heuristics() {
        group.bench_with_input(
            BenchmarkId::from_parameter(algorithm),
            &algorithm,
            |b, &algorithm| {
                b.iter(|| {
                    for &q in &queries {
                        let spec = QuerySpec {
                            vertex: q,
                            k: 2,
                            algorithm,
                        };
                        std::hint::black_box(run_query(&g, &spec, &opts));
                    }
                })
            },
        );
    }
    group.finish();
}

criterion_group!(benches, bench_algorithms);
criterion_main!(benches);
