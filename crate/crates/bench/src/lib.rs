//! Shared graph builders for the criterion benches.

use secs_core::{synthetic_graph, SyntheticSpec, TemporalGraph};

/// Mid-sized planted-community graph; big enough to separate the algorithms,
/// small enough for quick bench iterations.
pub fn bench_graph() -> TemporalGraph {
    synthetic_graph(&SyntheticSpec {
        vertices: 800,
        communities: 40,
        triples: 8_000,
        timestamps: 12,
        intra_fraction: 0.85,
        seed: 7,
    })
}
