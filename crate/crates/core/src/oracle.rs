//! Exhaustive ground truth at desk scale: the exact community optimum over
//! all intervals and vertex subsets, and a rebuild-based checker for the
//! incremental cumulative-graph updates.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cumulative::{CumulativeGraph, Interval};
use crate::error::{Error, Result};
use crate::graph::{TemporalGraph, VertexId};
use crate::search::{Algorithm, CommunityResult, Engagement};

/// Instance caps; the oracle refuses anything larger.
#[derive(Debug, Clone, Copy)]
pub struct OracleLimits {
    pub max_vertices: usize,
    pub max_timestamps: usize,
}

impl Default for OracleLimits {
    fn default() -> Self {
        OracleLimits {
            max_vertices: 10,
            max_timestamps: 6,
        }
    }
}

/// Ground-truth answer for one query.
#[derive(Debug, Clone)]
pub struct OracleResult {
    /// The optimum community, or `None` when no feasible candidate exists.
    pub optimum: Option<CommunityResult>,
    /// Best engagement over only the intervals at which the query vertex has
    /// edges on both ends; gauges what the interval pruning sacrifices.
    pub optimum_pruned: Option<Engagement>,
    /// Number of (interval, subset) pairs evaluated.
    pub candidates_examined: u64,
}

impl OracleResult {
    pub fn pruned_engagement_f64(&self) -> Option<f64> {
        use num_traits::ToPrimitive;
        self.optimum_pruned.and_then(|e| e.to_f64())
    }
}

/// Enumerates every interval (no two-ends pruning) and every vertex subset
/// containing `u`, keeping the feasible candidate of maximum engagement.
/// Ties favor the lexicographically smallest vertex set, then the smallest
/// interval.
pub fn exact_secs(
    g: &TemporalGraph,
    u: VertexId,
    k: u32,
    limits: &OracleLimits,
) -> Result<OracleResult> {
    let n = g.vertex_count();
    let times = g.times();
    if n > limits.max_vertices || n > 30 {
        return Err(Error::OracleCapExceeded(format!(
            "{n} vertices > cap {}",
            limits.max_vertices
        )));
    }
    if times.len() > limits.max_timestamps {
        return Err(Error::OracleCapExceeded(format!(
            "{} timestamps > cap {}",
            times.len(),
            limits.max_timestamps
        )));
    }
    let started = Instant::now();
    let u_times = g.incident_timestamps(u);

    let mut best: Option<(Engagement, Vec<VertexId>, Interval, u64)> = None;
    let mut best_pruned: Option<Engagement> = None;
    let mut examined = 0u64;

    for (i, &ts) in times.iter().enumerate() {
        for &te in &times[i..] {
            let interval = Interval::new(ts, te);
            let passes_two_ends =
                u_times.binary_search(&ts).is_ok() && u_times.binary_search(&te).is_ok();

            // per-interval weight matrix and static neighbor masks
            let mut w = vec![vec![0u32; n]; n];
            let mut nbr = vec![0u32; n];
            for &(a, b, t) in g.triples() {
                if interval.contains(t) {
                    w[a as usize][b as usize] += 1;
                    w[b as usize][a as usize] += 1;
                    nbr[a as usize] |= 1 << b;
                    nbr[b as usize] |= 1 << a;
                }
            }

            let u_bit = 1u32 << u;
            for mask in 0u32..(1 << n) {
                if mask & u_bit == 0 {
                    continue;
                }
                examined += 1;
                if !is_connected_kcore(mask, &nbr, k, u) {
                    continue;
                }
                let mut total = 0u64;
                let mut d_u = 0u64;
                for v in bits(mask) {
                    let d: u64 = bits(mask).map(|y| w[v][y] as u64).sum();
                    total += d;
                    if v == u as usize {
                        d_u = d;
                    }
                }
                debug_assert!(total > 0);
                let eng = Engagement::new(d_u, total);
                let verts: Vec<VertexId> = bits(mask).map(|v| v as VertexId).collect();
                let better = match &best {
                    None => true,
                    Some((be, bv, bi, _)) => {
                        eng > *be
                            || (eng == *be && (verts < *bv || (verts == *bv && interval < *bi)))
                    }
                };
                if better {
                    best = Some((eng, verts, interval, total / 2));
                }
                if passes_two_ends && best_pruned.is_none_or(|bp| eng > bp) {
                    best_pruned = Some(eng);
                }
            }
        }
    }

    let elapsed = started.elapsed();
    Ok(OracleResult {
        optimum: best.map(|(engagement, vertices, interval, temporal_edges)| CommunityResult {
            vertices,
            interval,
            engagement,
            temporal_edge_count: temporal_edges,
            algorithm: Algorithm::Exact,
            elapsed,
        }),
        optimum_pruned: best_pruned,
        candidates_examined: examined,
    })
}

fn bits(mask: u32) -> impl Iterator<Item = usize> {
    (0..32).filter(move |i| mask & (1 << i) != 0)
}

fn is_connected_kcore(mask: u32, nbr: &[u32], k: u32, u: VertexId) -> bool {
    for v in bits(mask) {
        if (nbr[v] & mask).count_ones() < k {
            return false;
        }
    }
    let mut reach = 1u32 << u;
    loop {
        let mut next = reach;
        for v in bits(reach) {
            next |= nbr[v] & mask;
        }
        if next == reach {
            break;
        }
        reach = next;
    }
    reach == mask
}

/// Outcome of a batch of random shrink-versus-rebuild trials.
#[derive(Debug, Clone)]
pub struct EquivalenceReport {
    pub trials_run: usize,
    /// First counterexample, if any.
    pub failure: Option<String>,
}

impl EquivalenceReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

/// Runs `trials` random shrink chains from the full span and checks each
/// final graph is identical to a from-scratch rebuild of its interval.
pub fn check_incremental_equivalence(
    g: &TemporalGraph,
    trials: usize,
    seed: u64,
) -> EquivalenceReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (lo, hi) = g.time_domain();
    for trial in 0..trials {
        let mut chain = CumulativeGraph::build(g, Interval::new(lo, hi));
        let mut path = Vec::new();
        while chain.interval().start < chain.interval().end {
            if !path.is_empty() && rng.gen_bool(0.3) {
                break;
            }
            chain = if rng.gen_bool(0.5) {
                path.push('L');
                chain.shrink_left(g).expect("width checked")
            } else {
                path.push('R');
                chain.shrink_right(g).expect("width checked")
            };
        }
        let rebuilt = CumulativeGraph::build(g, chain.interval());
        if let Some(msg) = mismatch_report(&chain, &rebuilt, &path) {
            return EquivalenceReport {
                trials_run: trial + 1,
                failure: Some(msg),
            };
        }
    }
    EquivalenceReport {
        trials_run: trials,
        failure: None,
    }
}

fn mismatch_report(
    chain: &CumulativeGraph,
    rebuilt: &CumulativeGraph,
    path: &[char],
) -> Option<String> {
    if chain == rebuilt {
        None
    } else {
        let path: String = path.iter().collect();
        Some(format!(
            "shrink chain '{path}' to {} diverges from rebuild: chain has {} vertices / {} occurrences, rebuild has {} / {}",
            chain.interval(),
            chain.vertex_count(),
            chain.occurrence_total(),
            rebuilt.vertex_count(),
            rebuilt.occurrence_total(),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::search::{run_query, validate_community, QuerySpec, SearchOptions};

    fn example_graph() -> TemporalGraph {
        let path = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures/example.txt");
        TemporalGraph::load_edge_list(path, 1, Some(0)).unwrap()
    }

    #[test]
    fn triangle_optimum_is_symmetric() {
        let g = TemporalGraph::from_triples(&[(0, 1, 0), (1, 2, 0), (0, 2, 0)]).unwrap();
        for u in 0..3 {
            let res = exact_secs(&g, u, 2, &OracleLimits::default()).unwrap();
            let opt = res.optimum.unwrap();
            assert_eq!(opt.engagement, Engagement::new(1, 3));
            assert_eq!(opt.vertices, vec![0, 1, 2]);
        }
    }

    #[test]
    fn example_optimum_at_least_one_third() {
        let g = example_graph();
        let res = exact_secs(&g, 0, 2, &OracleLimits::default()).unwrap();
        let opt = res.optimum.unwrap();
        assert!(opt.engagement >= Engagement::new(1, 3));
        validate_community(&g, &opt.vertices, opt.interval, 0, 2).unwrap();
        assert!(res.optimum_pruned.is_some());
        assert!(res.candidates_examined > 0);
    }

    #[test]
    fn caps_are_enforced() {
        let g = example_graph();
        let tight = OracleLimits {
            max_vertices: 3,
            max_timestamps: 6,
        };
        assert!(matches!(
            exact_secs(&g, 0, 2, &tight),
            Err(Error::OracleCapExceeded(_))
        ));
    }

    #[test]
    fn infeasible_instance_reports_no_community() {
        let g = TemporalGraph::from_triples(&[(0, 1, 0), (1, 2, 1)]).unwrap();
        let res = exact_secs(&g, 0, 2, &OracleLimits::default()).unwrap();
        assert!(res.optimum.is_none());
    }

    #[test]
    fn heuristics_never_beat_the_oracle_small() {
        use rand::{Rng, SeedableRng};
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let limits = OracleLimits::default();
        for _ in 0..60 {
            let mut triples = Vec::new();
            for _ in 0..rng.gen_range(3..30) {
                triples.push((
                    rng.gen_range(0..7u64),
                    rng.gen_range(0..7u64),
                    rng.gen_range(0..4i64),
                ));
            }
            let Ok(g) = TemporalGraph::from_triples(&triples) else {
                continue;
            };
            let k = rng.gen_range(1..4u32);
            let u = rng.gen_range(0..g.vertex_count()) as VertexId;
            let oracle = exact_secs(&g, u, k, &limits).unwrap();
            for algorithm in Algorithm::heuristics() {
                let outcome = run_query(
                    &g,
                    &QuerySpec {
                        vertex: u,
                        k,
                        algorithm,
                    },
                    &SearchOptions::default(),
                );
                if let Some(result) = outcome.result {
                    let opt = oracle
                        .optimum
                        .as_ref()
                        .expect("heuristic found a community, so one exists");
                    assert!(result.engagement <= opt.engagement);
                }
            }
        }
    }

    #[test]
    fn equivalence_check_passes_on_example() {
        let g = example_graph();
        let report = check_incremental_equivalence(&g, 100, 1234);
        assert!(report.passed());
        assert_eq!(report.trials_run, 100);
    }

    #[test]
    fn fig_style_paths_match_rebuilds() {
        let g = example_graph();
        let full = CumulativeGraph::build(&g, Interval::new(0, 4));
        let right = full.clone().shrink_right(&g).unwrap();
        assert_eq!(right, CumulativeGraph::build(&g, Interval::new(0, 3)));
        let left_twice = full
            .shrink_left(&g)
            .unwrap()
            .shrink_left(&g)
            .unwrap();
        assert_eq!(left_twice, CumulativeGraph::build(&g, Interval::new(2, 4)));
    }

    #[test]
    fn detector_flags_corrupted_chain() {
        let g = example_graph();
        let mut chain = CumulativeGraph::build(&g, Interval::new(0, 4))
            .shrink_right(&g)
            .unwrap();
        chain.corrupt_first_weight();
        let rebuilt = CumulativeGraph::build(&g, chain.interval());
        assert!(mismatch_report(&chain, &rebuilt, &['R']).is_some());
    }
}
