//! Benchmark workloads: query sampling, time-rescaled and node-sampled
//! derived graphs, synthetic graph generation, and the multi-query runner
//! that aggregates quality metrics per algorithm.

use std::collections::HashSet;
use std::time::Instant;

use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::cumulative::Interval;
use crate::error::Result;
use crate::graph::{TemporalGraph, VertexId};
use crate::metrics::{temporal_conductance, temporal_density, TcMode};
use crate::oracle::{exact_secs, OracleLimits, OracleResult};
use crate::search::{run_query, Algorithm, Engagement, QuerySpec, SearchOptions};

/// Graph derivation applied before a benchmark runs.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum DerivedRecipe {
    #[default]
    None,
    /// Rescale timestamps by an integer factor (denser buckets).
    Vts(u32),
    /// Induce the subgraph of a uniform vertex sample of this fraction.
    Vns(f64),
}

/// Re-buckets timestamps by `t -> t / factor` and re-deduplicates triples.
pub fn derive_vts(g: &TemporalGraph, factor: u32) -> TemporalGraph {
    assert!(factor >= 1, "factor must be positive");
    let raw: Vec<(u64, u64, i64)> = g
        .triples()
        .iter()
        .map(|&(u, v, t)| {
            (
                g.original_id(u),
                g.original_id(v),
                (t / factor) as i64,
            )
        })
        .collect();
    TemporalGraph::from_raw_triples(&raw, 1, Some(0)).expect("source graph is non-empty")
}

/// Induced temporal subgraph of a uniform vertex sample without replacement.
pub fn derive_vns(g: &TemporalGraph, fraction: f64, seed: u64) -> Result<TemporalGraph> {
    assert!(
        fraction > 0.0 && fraction <= 1.0,
        "fraction must lie in (0, 1]"
    );
    let n = g.vertex_count();
    let size = ((fraction * n as f64).round() as usize).min(n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sample: HashSet<VertexId> = rand::seq::index::sample(&mut rng, n, size.max(1).min(n))
        .into_iter()
        .map(|i| i as VertexId)
        .collect();
    let raw: Vec<(u64, u64, i64)> = g
        .triples()
        .iter()
        .filter(|&&(u, v, _)| sample.contains(&u) && sample.contains(&v))
        .map(|&(u, v, t)| (g.original_id(u), g.original_id(v), t as i64))
        .collect();
    TemporalGraph::from_raw_triples(&raw, 1, Some(0))
}

/// Uniform sample of query vertices without replacement. With `filter` set,
/// only vertices of de-temporal degree at least `k` are eligible. Returns the
/// sample (ascending) and whether it fell short of `count`.
pub fn sample_queries(
    g: &TemporalGraph,
    count: usize,
    k: u32,
    seed: u64,
    filter: bool,
) -> (Vec<VertexId>, bool) {
    assert!(count >= 1, "count must be positive");
    let detemp = g.detemporalize();
    let eligible: Vec<VertexId> = (0..g.vertex_count() as VertexId)
        .filter(|&v| !filter || detemp.degree(v) >= k as usize)
        .collect();
    if eligible.len() <= count {
        let short = eligible.len() < count;
        return (eligible, short);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut picked: Vec<VertexId> = rand::seq::index::sample(&mut rng, eligible.len(), count)
        .into_iter()
        .map(|i| eligible[i])
        .collect();
    picked.sort_unstable();
    (picked, false)
}

/// Planted-community synthetic temporal graph.
#[derive(Debug, Clone, Copy)]
pub struct SyntheticSpec {
    pub vertices: usize,
    pub communities: usize,
    pub triples: usize,
    pub timestamps: u32,
    /// Probability that a generated triple stays inside one community.
    pub intra_fraction: f64,
    pub seed: u64,
}

/// Generates a temporal graph whose edges mostly fall inside planted vertex
/// groups, with the remainder crossing groups uniformly.
pub fn synthetic_graph(spec: &SyntheticSpec) -> TemporalGraph {
    assert!(spec.communities >= 1);
    assert!(
        spec.vertices >= 2 * spec.communities,
        "every community needs at least two members"
    );
    assert!(spec.timestamps >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut raw = Vec::with_capacity(spec.triples);
    while raw.len() < spec.triples {
        let (u, v) = if rng.gen_bool(spec.intra_fraction) {
            // members of community c are c, c + communities, c + 2*communities, ...
            let c = rng.gen_range(0..spec.communities);
            let member_count = (spec.vertices - c).div_ceil(spec.communities);
            debug_assert!(member_count >= 2);
            let i = rng.gen_range(0..member_count);
            let mut j = rng.gen_range(0..member_count);
            while j == i {
                j = rng.gen_range(0..member_count);
            }
            (
                (c + i * spec.communities) as u64,
                (c + j * spec.communities) as u64,
            )
        } else {
            let u = rng.gen_range(0..spec.vertices) as u64;
            let mut v = rng.gen_range(0..spec.vertices) as u64;
            while v == u {
                v = rng.gen_range(0..spec.vertices) as u64;
            }
            (u, v)
        };
        raw.push((u, v, rng.gen_range(0..spec.timestamps) as i64));
    }
    TemporalGraph::from_raw_triples(&raw, 1, Some(0)).expect("generator emits real edges")
}

/// Unstructured random temporal graph for property tests.
pub fn uniform_random_graph(
    vertices: usize,
    triples: usize,
    timestamps: u32,
    seed: u64,
) -> TemporalGraph {
    assert!(vertices >= 2 && triples >= 1 && timestamps >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut raw = Vec::with_capacity(triples);
    for _ in 0..triples {
        let u = rng.gen_range(0..vertices) as u64;
        let mut v = rng.gen_range(0..vertices) as u64;
        while v == u {
            v = rng.gen_range(0..vertices) as u64;
        }
        raw.push((u, v, rng.gen_range(0..timestamps) as i64));
    }
    TemporalGraph::from_raw_triples(&raw, 1, Some(0)).expect("triples are never self-loops")
}

/// What to run: queries, parameters, algorithms, and reporting modes.
#[derive(Debug, Clone)]
pub struct BenchmarkPlan {
    pub query_count: usize,
    pub ks: Vec<u32>,
    pub algorithms: Vec<Algorithm>,
    pub seed: u64,
    pub derived: DerivedRecipe,
    /// Also compute the exact optimum per query and check dominance.
    pub include_oracle: bool,
    pub oracle_limits: OracleLimits,
    pub options: SearchOptions,
    pub tc_mode: TcMode,
    /// Restrict query sampling to vertices of de-temporal degree >= k.
    pub filter_queries: bool,
}

impl Default for BenchmarkPlan {
    fn default() -> Self {
        BenchmarkPlan {
            query_count: 100,
            ks: vec![2],
            algorithms: Algorithm::heuristics().to_vec(),
            seed: 42,
            derived: DerivedRecipe::None,
            include_oracle: false,
            oracle_limits: OracleLimits::default(),
            options: SearchOptions::default(),
            tc_mode: TcMode::default(),
            filter_queries: true,
        }
    }
}

/// One algorithm run on one query.
#[derive(Debug, Clone, Serialize)]
pub struct QueryRecord {
    pub algorithm: Algorithm,
    /// Original (raw) vertex id of the query.
    pub query: u64,
    pub k: u32,
    pub found: bool,
    pub interval: Option<Interval>,
    pub vertex_count: usize,
    pub engagement: Option<f64>,
    pub temporal_density: Option<f64>,
    pub temporal_conductance: Option<f64>,
    pub temporal_edges: u64,
    pub elapsed_us: u64,
    pub expanded_fraction: Option<f64>,
    pub oracle_optimum: Option<f64>,
    pub dominance_ok: Option<bool>,
    pub error: Option<String>,
}

/// Per-algorithm aggregation; undefined metrics are excluded from the means
/// and counted.
#[derive(Debug, Clone, Serialize)]
pub struct AlgorithmSummary {
    pub algorithm: Algorithm,
    pub queries: usize,
    pub communities_found: usize,
    pub errors: usize,
    pub mean_elapsed_us: f64,
    pub mean_engagement: Option<f64>,
    pub excluded_engagement: usize,
    pub mean_temporal_density: Option<f64>,
    pub excluded_density: usize,
    pub mean_temporal_conductance: Option<f64>,
    pub excluded_conductance: usize,
    pub mean_expanded_fraction: Option<f64>,
    /// Present when the oracle ran: true iff no heuristic row beat it.
    pub dominance_all: Option<bool>,
}

#[derive(Debug, Clone)]
pub struct BenchmarkReport {
    pub records: Vec<QueryRecord>,
    pub summaries: Vec<AlgorithmSummary>,
    pub notes: Vec<String>,
}

/// Executes every planned algorithm on every sampled query. Per-query
/// failures are recorded, never fatal.
pub fn run_benchmark(g: &TemporalGraph, plan: &BenchmarkPlan) -> Result<BenchmarkReport> {
    let derived;
    let graph: &TemporalGraph = match plan.derived {
        DerivedRecipe::None => g,
        DerivedRecipe::Vts(factor) => {
            derived = derive_vts(g, factor);
            &derived
        }
        DerivedRecipe::Vns(fraction) => {
            derived = derive_vns(g, fraction, plan.seed)?;
            &derived
        }
    };

    let mut notes = Vec::new();
    let mut records: Vec<QueryRecord> = Vec::new();
    let need_oracle =
        plan.include_oracle || plan.algorithms.contains(&Algorithm::Exact);

    for &k in &plan.ks {
        let (queries, short) =
            sample_queries(graph, plan.query_count, k, plan.seed, plan.filter_queries);
        if short {
            notes.push(format!(
                "k={k}: only {} eligible query vertices (requested {})",
                queries.len(),
                plan.query_count
            ));
        }

        let oracle_cells: Vec<Option<OracleCell>> = queries
            .par_iter()
            .map(|&q| {
                need_oracle.then(|| {
                    let started = Instant::now();
                    let outcome = exact_secs(graph, q, k, &plan.oracle_limits);
                    OracleCell {
                        outcome: outcome.map_err(|e| e.to_string()),
                        elapsed_us: started.elapsed().as_micros() as u64,
                    }
                })
            })
            .collect();

        let tasks: Vec<(usize, Algorithm)> = queries
            .iter()
            .enumerate()
            .flat_map(|(qi, _)| plan.algorithms.iter().map(move |&a| (qi, a)))
            .collect();
        let batch: Vec<QueryRecord> = tasks
            .par_iter()
            .map(|&(qi, algorithm)| {
                run_task(
                    graph,
                    queries[qi],
                    k,
                    algorithm,
                    plan,
                    oracle_cells[qi].as_ref(),
                )
            })
            .collect();
        records.extend(batch);
    }

    let summaries = summarize(&records, &plan.algorithms);
    Ok(BenchmarkReport {
        records,
        summaries,
        notes,
    })
}

struct OracleCell {
    outcome: std::result::Result<OracleResult, String>,
    elapsed_us: u64,
}

fn run_task(
    g: &TemporalGraph,
    query: VertexId,
    k: u32,
    algorithm: Algorithm,
    plan: &BenchmarkPlan,
    oracle: Option<&OracleCell>,
) -> QueryRecord {
    let raw_query = g.original_id(query);
    let mut record = QueryRecord {
        algorithm,
        query: raw_query,
        k,
        found: false,
        interval: None,
        vertex_count: 0,
        engagement: None,
        temporal_density: None,
        temporal_conductance: None,
        temporal_edges: 0,
        elapsed_us: 0,
        expanded_fraction: None,
        oracle_optimum: None,
        dominance_ok: None,
        error: None,
    };

    let oracle_engagement: Option<Engagement> = match oracle {
        Some(cell) => match &cell.outcome {
            Ok(res) => res.optimum.as_ref().map(|o| o.engagement),
            Err(_) => None,
        },
        None => None,
    };
    if let Some(opt) = oracle_engagement {
        record.oracle_optimum = opt.to_f64();
    }

    if algorithm == Algorithm::Exact {
        let cell = oracle.expect("oracle precomputed when exact is planned");
        record.elapsed_us = cell.elapsed_us;
        match &cell.outcome {
            Ok(res) => {
                if let Some(opt) = &res.optimum {
                    fill_community(&mut record, g, opt, plan.tc_mode);
                }
            }
            Err(msg) => record.error = Some(msg.clone()),
        }
        return record;
    }

    let outcome = run_query(
        g,
        &QuerySpec {
            vertex: query,
            k,
            algorithm,
        },
        &plan.options,
    );
    record.elapsed_us = outcome.elapsed.as_micros() as u64;
    record.expanded_fraction = outcome.expanded_fraction();
    if let Some(result) = &outcome.result {
        fill_community(&mut record, g, result, plan.tc_mode);
        record.dominance_ok = match oracle {
            Some(cell) => match &cell.outcome {
                Ok(_) => Some(match oracle_engagement {
                    Some(opt) => result.engagement <= opt,
                    // the oracle saw no feasible community, yet one was found
                    None => false,
                }),
                Err(_) => None,
            },
            None => None,
        };
    }
    record
}

fn fill_community(
    record: &mut QueryRecord,
    g: &TemporalGraph,
    result: &crate::search::CommunityResult,
    tc_mode: TcMode,
) {
    record.found = true;
    record.interval = Some(result.interval);
    record.vertex_count = result.vertices.len();
    record.temporal_edges = result.temporal_edge_count;
    record.engagement = result.engagement.to_f64();
    record.temporal_density = temporal_density(g, &result.vertices, result.interval)
        .ok()
        .and_then(|r| r.to_f64());
    record.temporal_conductance =
        temporal_conductance(g, &result.vertices, result.interval, tc_mode)
            .ok()
            .and_then(|r| r.to_f64());
}

/// Aggregates records per algorithm, in the given order.
pub fn summarize(records: &[QueryRecord], order: &[Algorithm]) -> Vec<AlgorithmSummary> {
    order
        .iter()
        .map(|&algorithm| {
            let rows: Vec<&QueryRecord> =
                records.iter().filter(|r| r.algorithm == algorithm).collect();
            let queries = rows.len();
            let communities_found = rows.iter().filter(|r| r.found).count();
            let errors = rows.iter().filter(|r| r.error.is_some()).count();
            let mean_elapsed_us = if queries > 0 {
                rows.iter().map(|r| r.elapsed_us as f64).sum::<f64>() / queries as f64
            } else {
                0.0
            };
            let (mean_engagement, excluded_engagement) =
                mean_of(&rows, |r| r.engagement);
            let (mean_temporal_density, excluded_density) =
                mean_of(&rows, |r| r.temporal_density);
            let (mean_temporal_conductance, excluded_conductance) =
                mean_of(&rows, |r| r.temporal_conductance);
            let (mean_expanded_fraction, _) = mean_of(&rows, |r| r.expanded_fraction);
            let dominance_rows: Vec<bool> =
                rows.iter().filter_map(|r| r.dominance_ok).collect();
            let dominance_all = if dominance_rows.is_empty() {
                None
            } else {
                Some(dominance_rows.iter().all(|&ok| ok))
            };
            AlgorithmSummary {
                algorithm,
                queries,
                communities_found,
                errors,
                mean_elapsed_us,
                mean_engagement,
                excluded_engagement,
                mean_temporal_density,
                excluded_density,
                mean_temporal_conductance,
                excluded_conductance,
                mean_expanded_fraction,
                dominance_all,
            }
        })
        .collect()
}

fn mean_of<F: Fn(&QueryRecord) -> Option<f64>>(
    rows: &[&QueryRecord],
    get: F,
) -> (Option<f64>, usize) {
    let values: Vec<f64> = rows.iter().filter_map(|r| get(r)).collect();
    let excluded = rows.len() - values.len();
    if values.is_empty() {
        (None, excluded)
    } else {
        (
            Some(values.iter().sum::<f64>() / values.len() as f64),
            excluded,
        )
    }
}
