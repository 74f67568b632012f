//! Weighted cumulative graphs over time intervals, incremental boundary
//! shrinking, and the pruned breadth-first enumeration of intervals driving
//! every search algorithm.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::graph::{TemporalGraph, Timestamp, VertexId};

/// Inclusive timestamp interval `[start, end]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize)]
pub struct Interval {
    pub start: Timestamp,
    pub end: Timestamp,
}

impl Interval {
    pub fn new(start: Timestamp, end: Timestamp) -> Self {
        assert!(start <= end, "interval start must not exceed its end");
        Interval { start, end }
    }

    /// Inclusive width in time units.
    pub fn width(&self) -> u64 {
        (self.end - self.start) as u64 + 1
    }

    pub fn contains(&self, t: Timestamp) -> bool {
        t >= self.start && t <= self.end
    }
}

impl std::fmt::Display for Interval {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{}, {}]", self.start, self.end)
    }
}

/// Weighted static graph for one interval: each edge's weight counts its
/// occurrences within the interval. Vertices with no incident edge in the
/// interval are absent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CumulativeGraph {
    interval: Interval,
    /// Per vertex: `(neighbor, weight)` sorted by neighbor, weights > 0.
    adj: Vec<Vec<(VertexId, u32)>>,
    /// Per vertex: sum of incident edge weights.
    temporal_deg: Vec<u64>,
    /// Vertices with at least one incident edge.
    present: usize,
    /// Total weight, i.e. the number of temporal edges in the interval.
    occurrences: u64,
}

impl CumulativeGraph {
    /// Builds the cumulative graph of `g` for `iv` from scratch.
    pub fn build(g: &TemporalGraph, iv: Interval) -> Self {
        let mut weights: HashMap<(VertexId, VertexId), u32> = HashMap::new();
        let times = g.times();
        let lo = times.partition_point(|&t| t < iv.start);
        let hi = times.partition_point(|&t| t <= iv.end);
        for &t in &times[lo..hi] {
            for &(u, v) in g.edges_at(t) {
                *weights.entry((u, v)).or_insert(0) += 1;
            }
        }

        let n = g.vertex_count();
        let mut adj = vec![Vec::new(); n];
        let mut temporal_deg = vec![0u64; n];
        let mut occurrences = 0u64;
        for (&(u, v), &w) in &weights {
            adj[u as usize].push((v, w));
            adj[v as usize].push((u, w));
            temporal_deg[u as usize] += w as u64;
            temporal_deg[v as usize] += w as u64;
            occurrences += w as u64;
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        let present = adj.iter().filter(|l| !l.is_empty()).count();
        CumulativeGraph {
            interval: iv,
            adj,
            temporal_deg,
            present,
            occurrences,
        }
    }

    pub fn interval(&self) -> Interval {
        self.interval
    }

    /// Capacity of the vertex id space (the parent graph's vertex count).
    pub fn id_space(&self) -> usize {
        self.adj.len()
    }

    /// Number of present vertices.
    pub fn vertex_count(&self) -> usize {
        self.present
    }

    /// Number of temporal edges covered by the interval.
    pub fn occurrence_total(&self) -> u64 {
        self.occurrences
    }

    pub fn has_vertex(&self, v: VertexId) -> bool {
        !self.adj[v as usize].is_empty()
    }

    /// `(neighbor, weight)` pairs of `v`, sorted by neighbor.
    pub fn neighbors(&self, v: VertexId) -> &[(VertexId, u32)] {
        &self.adj[v as usize]
    }

    /// Distinct-neighbor count of `v`.
    pub fn static_degree(&self, v: VertexId) -> usize {
        self.adj[v as usize].len()
    }

    /// Sum of incident edge weights of `v`.
    pub fn temporal_degree(&self, v: VertexId) -> u64 {
        self.temporal_deg[v as usize]
    }

    /// Weight of the edge `(a, b)`, or 0 if absent.
    pub fn weight(&self, a: VertexId, b: VertexId) -> u32 {
        match self.adj[a as usize].binary_search_by_key(&b, |&(v, _)| v) {
            Ok(i) => self.adj[a as usize][i].1,
            Err(_) => 0,
        }
    }

    /// Present vertex ids, ascending.
    pub fn present_vertices(&self) -> Vec<VertexId> {
        (0..self.adj.len() as VertexId)
            .filter(|&v| self.has_vertex(v))
            .collect()
    }

    /// All weighted edges as `(u, v, w)` with `u < v`, sorted.
    pub fn weighted_edges(&self) -> Vec<(VertexId, VertexId, u32)> {
        let mut out = Vec::new();
        for u in 0..self.adj.len() as VertexId {
            for &(v, w) in &self.adj[u as usize] {
                if u < v {
                    out.push((u, v, w));
                }
            }
        }
        out
    }

    /// Narrows to `[start + 1, end]`, decrementing weights per the edges at
    /// the removed boundary timestamp.
    pub fn shrink_left(mut self, g: &TemporalGraph) -> Result<Self> {
        if self.interval.start == self.interval.end {
            return Err(Error::InvalidInterval(format!(
                "cannot shrink width-1 interval {}",
                self.interval
            )));
        }
        let new_start = self.interval.start + 1;
        self.strip_boundary(g, self.interval.start);
        self.interval.start = new_start;
        Ok(self)
    }

    /// Narrows to `[start, end - 1]`, decrementing weights per the edges at
    /// the removed boundary timestamp.
    pub fn shrink_right(mut self, g: &TemporalGraph) -> Result<Self> {
        if self.interval.start == self.interval.end {
            return Err(Error::InvalidInterval(format!(
                "cannot shrink width-1 interval {}",
                self.interval
            )));
        }
        let new_end = self.interval.end - 1;
        self.strip_boundary(g, self.interval.end);
        self.interval.end = new_end;
        Ok(self)
    }

    /// Jumps the start boundary to the next distinct timestamp. All skipped
    /// units carry no edges, so only the old boundary is stripped.
    pub(crate) fn step_start_to(&mut self, g: &TemporalGraph, new_start: Timestamp) {
        debug_assert!(new_start > self.interval.start && new_start <= self.interval.end);
        debug_assert!(
            !g.times()
                .iter()
                .any(|&t| t > self.interval.start && t < new_start),
            "skipped a timestamp that carries edges"
        );
        self.strip_boundary(g, self.interval.start);
        self.interval.start = new_start;
    }

    /// Jumps the end boundary to the previous distinct timestamp.
    pub(crate) fn step_end_to(&mut self, g: &TemporalGraph, new_end: Timestamp) {
        debug_assert!(new_end < self.interval.end && new_end >= self.interval.start);
        debug_assert!(
            !g.times()
                .iter()
                .any(|&t| t < self.interval.end && t > new_end),
            "skipped a timestamp that carries edges"
        );
        self.strip_boundary(g, self.interval.end);
        self.interval.end = new_end;
    }

    fn strip_boundary(&mut self, g: &TemporalGraph, t: Timestamp) {
        for &(u, v) in g.edges_at(t) {
            self.decrement(u, v);
            self.decrement(v, u);
            self.temporal_deg[u as usize] -= 1;
            self.temporal_deg[v as usize] -= 1;
            self.occurrences -= 1;
        }
    }

    fn decrement(&mut self, a: VertexId, b: VertexId) {
        let list = &mut self.adj[a as usize];
        let i = list
            .binary_search_by_key(&b, |&(v, _)| v)
            .expect("edge present in the covering interval");
        if list[i].1 == 1 {
            list.remove(i);
            if list.is_empty() {
                self.present -= 1;
            }
        } else {
            list[i].1 -= 1;
        }
    }

    /// Deliberately breaks one adjacency weight; detector sanity tests only.
    #[cfg(test)]
    pub(crate) fn corrupt_first_weight(&mut self) {
        for list in &mut self.adj {
            if let Some(first) = list.first_mut() {
                first.1 += 1;
                return;
            }
        }
    }

    /// Weighted subgraph induced by `keep`. The interval is unchanged.
    pub fn induced(&self, keep: &std::collections::HashSet<VertexId>) -> Self {
        let mut adj = vec![Vec::new(); self.adj.len()];
        let mut temporal_deg = vec![0u64; self.adj.len()];
        let mut occurrences = 0u64;
        for &u in keep {
            let filtered: Vec<(VertexId, u32)> = self.adj[u as usize]
                .iter()
                .filter(|&&(v, _)| keep.contains(&v))
                .copied()
                .collect();
            temporal_deg[u as usize] = filtered.iter().map(|&(_, w)| w as u64).sum();
            occurrences += temporal_deg[u as usize];
            adj[u as usize] = filtered;
        }
        let present = adj.iter().filter(|l| !l.is_empty()).count();
        CumulativeGraph {
            interval: self.interval,
            adj,
            temporal_deg,
            present,
            occurrences: occurrences / 2,
        }
    }
}

/// Breadth-first stream of candidate intervals for query vertex `u`.
///
/// The stream walks the shrinking tree rooted at the full span, one boundary
/// timestamp per step, and yields an interval only when `u` has at least one
/// incident edge at both of its ends. Every interval appears at most once.
pub fn enumerate_intervals<'g>(
    g: &'g TemporalGraph,
    u: VertexId,
) -> impl Iterator<Item = Interval> + 'g {
    let times = g.times();
    let m = times.len();
    let u_times = g.incident_timestamps(u);
    (0..m)
        .flat_map(move |level| {
            let width = m - level;
            (0..=level)
                .rev()
                .map(move |i| Interval::new(times[i], times[i + width - 1]))
        })
        .filter(move |iv| {
            u_times.binary_search(&iv.start).is_ok() && u_times.binary_search(&iv.end).is_ok()
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn example_graph() -> TemporalGraph {
        let path = concat!(
            env!("CARGO_MANIFEST_DIR"),
            "/tests/fixtures/example.txt"
        );
        TemporalGraph::load_edge_list(path, 1, Some(0)).unwrap()
    }

    #[test]
    fn build_full_span_degrees() {
        let g = example_graph();
        let c = CumulativeGraph::build(&g, Interval::new(0, 4));
        assert_eq!(c.temporal_degree(0), 9);
        assert_eq!(c.occurrence_total(), 27);
        assert_eq!(c.vertex_count(), 7);
        // temporal degrees sum to twice the covered temporal edges
        let sum: u64 = (0..7).map(|v| c.temporal_degree(v)).sum();
        assert_eq!(sum, 2 * c.occurrence_total());
    }

    #[test]
    fn build_empty_interval() {
        let g = TemporalGraph::from_triples(&[(0, 1, 0), (1, 2, 4)]).unwrap();
        let c = CumulativeGraph::build(&g, Interval::new(2, 3));
        assert_eq!(c.vertex_count(), 0);
        assert_eq!(c.occurrence_total(), 0);
        assert!(c.weighted_edges().is_empty());
    }

    #[test]
    fn shrink_right_matches_rebuild() {
        let g = example_graph();
        let full = CumulativeGraph::build(&g, Interval::new(0, 4));
        let shrunk = full.shrink_right(&g).unwrap();
        assert_eq!(shrunk, CumulativeGraph::build(&g, Interval::new(0, 3)));
    }

    #[test]
    fn shrink_of_edgeless_boundary_is_identity() {
        let g = TemporalGraph::from_triples(&[(0, 1, 0), (0, 1, 2), (1, 2, 2)]).unwrap();
        // t = 1 carries no edges
        let c = CumulativeGraph::build(&g, Interval::new(1, 2));
        let shrunk = c.clone().shrink_left(&g).unwrap();
        assert_eq!(shrunk.weighted_edges(), c.weighted_edges());
        assert_eq!(shrunk.interval(), Interval::new(2, 2));
    }

    #[test]
    fn shrink_width_one_fails() {
        let g = TemporalGraph::from_triples(&[(0, 1, 0)]).unwrap();
        let c = CumulativeGraph::build(&g, Interval::new(0, 0));
        assert!(c.clone().shrink_left(&g).is_err());
        assert!(c.shrink_right(&g).is_err());
    }

    #[test]
    fn random_shrink_chain_matches_rebuild() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let mut triples = Vec::new();
            for _ in 0..rng.gen_range(1..40) {
                let u = rng.gen_range(0..6u64);
                let v = rng.gen_range(0..6u64);
                let t = rng.gen_range(0..5i64);
                triples.push((u, v, t));
            }
            let Ok(g) = TemporalGraph::from_triples(&triples) else {
                continue;
            };
            let (lo, hi) = g.time_domain();
            let mut c = CumulativeGraph::build(&g, Interval::new(lo, hi));
            while c.interval().start < c.interval().end && rng.gen_bool(0.8) {
                c = if rng.gen_bool(0.5) {
                    c.shrink_left(&g).unwrap()
                } else {
                    c.shrink_right(&g).unwrap()
                };
            }
            let rebuilt = CumulativeGraph::build(&g, c.interval());
            assert_eq!(c, rebuilt);
        }
    }

    #[test]
    fn induced_keeps_only_internal_edges() {
        let g = example_graph();
        let c = CumulativeGraph::build(&g, Interval::new(0, 4));
        let keep: HashSet<VertexId> = [0, 1, 2].into_iter().collect();
        let sub = c.induced(&keep);
        assert_eq!(
            sub.weighted_edges(),
            vec![(0, 1, 3), (0, 2, 3), (1, 2, 3)]
        );
        assert_eq!(sub.occurrence_total(), 9);
        assert_eq!(sub.vertex_count(), 3);
        assert_eq!(sub.temporal_degree(0), 6);
    }

    #[test]
    fn point_interval_stream() {
        let g = TemporalGraph::from_triples(&[(0, 1, 2), (2, 3, 2)]).unwrap();
        let got: Vec<Interval> = enumerate_intervals(&g, 0).collect();
        assert_eq!(got, vec![Interval::new(2, 2)]);
    }

    #[test]
    fn stream_starts_with_full_span() {
        let g = example_graph();
        let mut it = enumerate_intervals(&g, 0);
        assert_eq!(it.next(), Some(Interval::new(0, 4)));
    }

    #[test]
    fn stream_matches_exhaustive_filter() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..40 {
            let mut triples = Vec::new();
            for _ in 0..rng.gen_range(1..30) {
                triples.push((
                    rng.gen_range(0..6u64),
                    rng.gen_range(0..6u64),
                    rng.gen_range(0..6i64),
                ));
            }
            let Ok(g) = TemporalGraph::from_triples(&triples) else {
                continue;
            };
            for u in 0..g.vertex_count() as VertexId {
                let yielded: Vec<Interval> = enumerate_intervals(&g, u).collect();
                let as_set: HashSet<Interval> = yielded.iter().copied().collect();
                assert_eq!(as_set.len(), yielded.len(), "duplicate interval yielded");

                let u_times: HashSet<Timestamp> =
                    g.incident_timestamps(u).into_iter().collect();
                let mut expect = HashSet::new();
                for (i, &ts) in g.times().iter().enumerate() {
                    for &te in &g.times()[i..] {
                        if u_times.contains(&ts) && u_times.contains(&te) {
                            expect.insert(Interval::new(ts, te));
                        }
                    }
                }
                assert_eq!(as_set, expect);

                let m = g.times().len();
                assert!(yielded.len() <= (1 + m) * m / 2);
            }
        }
    }
}
