use criterion::{criterion_group, criterion_main, Criterion};

use secs_bench::bench_graph;
use secs_core::{CumulativeGraph, Interval};

fn bench_cumulative(c: &mut Criterion) {
    let g = bench_graph();
    let (lo, hi) = g.time_domain();

    let mut group = c.benchmark_group("cumulative");
    group.bench_function("rebuild_each_width", |b| {
        b.iter(|| {
            for end in lo..=hi {
                std::hint::black_box(CumulativeGraph::build(&g, Interval::new(lo, end)));
            }
        })
    });
    group.bench_function("shrink_chain", |b| {
        b.iter(|| {
            let mut c = CumulativeGraph::build(&g, Interval::new(lo, hi));
            while c.interval().start < c.interval().end {
                c = c.shrink_right(&g).unwrap();
                std::hint::black_box(c.vertex_count());
            }
        })
    });
    group.finish();
}

criterion_group!(benches, bench_cumulative);
criterion_main!(benches);
