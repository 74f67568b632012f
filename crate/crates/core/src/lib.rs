//! Community search on temporal graphs, driven by the query vertex's
//! engagement level.
//!
//! Given a temporal graph, a query vertex `u`, and a parameter `k`, the
//! engine finds a temporal subgraph whose static projection is a connected
//! k-core containing `u` and in which `u`'s engagement level — its share
//! of the community's temporal degree mass — is as high as the greedy
//! searches can push it. Four algorithms are provided: a global top-down
//! peel (`tdgp`) and three bottom-up local searches (`buls`, `buls+`,
//! `buls*`) that first grow a candidate set around the query vertex and
//! peel only that. An exhaustive oracle serves as ground truth at desk
//! scale, and a benchmark harness aggregates quality metrics over sampled
//! query workloads.
//!
//! ```
//! use secs_core::{run_query, Algorithm, QuerySpec, SearchOptions, TemporalGraph};
//!
//! // a triangle that interacts twice plus a pendant vertex
//! let g = TemporalGraph::from_triples(&[
//!     (0, 1, 0), (1, 2, 0), (0, 2, 0),
//!     (0, 1, 1), (1, 2, 1), (0, 2, 1),
//!     (2, 3, 1),
//! ]).unwrap();
//!
//! let spec = QuerySpec { vertex: 0, k: 2, algorithm: Algorithm::BulsStar };
//! let outcome = run_query(&g, &spec, &SearchOptions::default());
//! let community = outcome.result.unwrap();
//! assert_eq!(community.vertices, vec![0, 1, 2]);
//! assert_eq!(community.engagement_f64(), 1.0 / 3.0);
//! ```

pub mod cumulative;
pub mod error;
pub mod graph;
pub mod kcore;
pub mod metrics;
pub mod oracle;
pub mod search;
pub mod workload;

pub use cumulative::{enumerate_intervals, CumulativeGraph, Interval};
pub use error::{Error, Result};
pub use graph::{DetemporalGraph, TemporalGraph, Timestamp, VertexId};
pub use kcore::{k_core, restrict_to_query_core, CoreSubgraph};
pub use metrics::{
    community_metrics, engagement_level, temporal_conductance, temporal_density,
    CommunityMetrics, TcMode,
};
pub use oracle::{
    check_incremental_equivalence, exact_secs, EquivalenceReport, OracleLimits, OracleResult,
};
pub use search::{
    advanced_candidates, naive_candidates, run_query, validate_community, Algorithm,
    CommunityResult, Engagement, ExpandStrategy, PeelGuard, QuerySpec, SearchOptions,
    SearchOutcome,
};
pub use workload::{
    derive_vns, derive_vts, run_benchmark, sample_queries, synthetic_graph, uniform_random_graph,
    AlgorithmSummary, BenchmarkPlan, BenchmarkReport, DerivedRecipe, QueryRecord, SyntheticSpec,
};
