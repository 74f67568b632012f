//! Community search algorithms: global top-down greedy peeling and the
//! bottom-up local-search family with naive and strategy-driven candidate
//! generation.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap, HashSet, VecDeque};
use std::str::FromStr;
use std::time::{Duration, Instant};

use num_rational::Ratio;
use rayon::prelude::*;

use crate::cumulative::{CumulativeGraph, Interval};
use crate::graph::{TemporalGraph, VertexId};
use crate::kcore::{restrict_to_query_core, CoreSubgraph};

/// Exact engagement value: the query vertex's temporal degree over the sum of
/// all temporal degrees in the community.
pub type Engagement = Ratio<u64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Tdgp,
    Buls,
    BulsPlus,
    BulsStar,
    Exact,
}

impl Algorithm {
    pub fn as_str(&self) -> &'static str {
        match self {
            Algorithm::Tdgp => "tdgp",
            Algorithm::Buls => "buls",
            Algorithm::BulsPlus => "buls+",
            Algorithm::BulsStar => "buls*",
            Algorithm::Exact => "exact",
        }
    }

    /// The four greedy algorithms, in the order reports list them.
    pub fn heuristics() -> [Algorithm; 4] {
        [
            Algorithm::Tdgp,
            Algorithm::Buls,
            Algorithm::BulsPlus,
            Algorithm::BulsStar,
        ]
    }
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "tdgp" => Ok(Algorithm::Tdgp),
            "buls" => Ok(Algorithm::Buls),
            "buls+" | "buls-plus" => Ok(Algorithm::BulsPlus),
            "buls*" | "buls-star" => Ok(Algorithm::BulsStar),
            "exact" => Ok(Algorithm::Exact),
            other => Err(format!(
                "unknown algorithm '{other}' (expected tdgp, buls, buls+, buls*, or exact)"
            )),
        }
    }
}

impl serde::Serialize for Algorithm {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.as_str())
    }
}

/// Loop guard used while peeling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PeelGuard {
    /// After each removal, cascade sub-k vertices and restrict to the query
    /// vertex's component; stop when the query vertex dies.
    #[default]
    Revalidate,
    /// Stop at the first removal that leaves anything other than a connected
    /// k-core containing the query vertex.
    Halt,
}

impl FromStr for PeelGuard {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "revalidate" => Ok(PeelGuard::Revalidate),
            "halt" => Ok(PeelGuard::Halt),
            other => Err(format!("unknown guard '{other}' (expected revalidate or halt)")),
        }
    }
}

/// Expansion rule applied while growing a candidate set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExpandStrategy {
    Reference,
    Engagement,
    Occurrence,
}

#[derive(Debug, Clone, Copy)]
pub struct QuerySpec {
    pub vertex: VertexId,
    pub k: u32,
    pub algorithm: Algorithm,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct SearchOptions {
    pub guard: PeelGuard,
}

/// A community reported by one of the algorithms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommunityResult {
    /// Community members, ascending dense ids.
    pub vertices: Vec<VertexId>,
    pub interval: Interval,
    pub engagement: Engagement,
    /// Temporal edges induced by the members within the interval.
    pub temporal_edge_count: u64,
    pub algorithm: Algorithm,
    pub elapsed: Duration,
}

impl CommunityResult {
    pub fn engagement_f64(&self) -> f64 {
        use num_traits::ToPrimitive;
        self.engagement.to_f64().unwrap_or(f64::NAN)
    }
}

/// Full result of one query, with telemetry beyond the community itself.
#[derive(Debug, Clone)]
pub struct SearchOutcome {
    pub result: Option<CommunityResult>,
    /// `(candidate set size, cumulative-graph vertex count)` for the first
    /// processed interval; local algorithms only.
    pub first_expanded: Option<(usize, usize)>,
    /// Running best engagement after each processed interval.
    pub best_history: Vec<Engagement>,
    pub intervals_processed: usize,
    pub elapsed: Duration,
}

impl SearchOutcome {
    /// Candidate-set size of the first interval as a fraction of that
    /// cumulative graph's vertex count.
    pub fn expanded_fraction(&self) -> Option<f64> {
        self.first_expanded
            .map(|(set, total)| set as f64 / total.max(1) as f64)
    }
}

#[derive(Debug, Clone)]
struct IntervalCandidate {
    engagement: Engagement,
    vertices: Vec<VertexId>,
    interval: Interval,
    temporal_edges: u64,
}

/// Per-interval search output: the best candidate, if any, and the
/// expanded-set telemetry of the first interval.
type IntervalOutcome = (Option<IntervalCandidate>, Option<(usize, usize)>);

/// Running maximum across the interval stream.
#[derive(Debug, Clone, Default)]
struct SearchState {
    best_engagement: Engagement,
    best: Option<IntervalCandidate>,
}

impl SearchState {
    fn merge(&mut self, cand: IntervalCandidate) {
        let replace = match &self.best {
            None => true,
            Some(cur) => {
                cand.engagement > cur.engagement
                    || (cand.engagement == cur.engagement && cand.interval < cur.interval)
            }
        };
        if replace {
            self.best_engagement = cand.engagement;
            self.best = Some(cand);
        }
    }
}

/// Runs one of the greedy algorithms for `spec` on `g`.
///
/// Intervals at the same depth of the shrinking tree are searched in
/// parallel; the outcome is independent of the worker count.
pub fn run_query(g: &TemporalGraph, spec: &QuerySpec, opts: &SearchOptions) -> SearchOutcome {
    assert!(spec.k >= 1, "k must be positive");
    assert!(
        (spec.vertex as usize) < g.vertex_count(),
        "query vertex out of range"
    );
    assert!(
        spec.algorithm != Algorithm::Exact,
        "the exact algorithm is served by the oracle module"
    );
    let start = Instant::now();
    let engine = Engine {
        g,
        u: spec.vertex,
        k: spec.k,
        guard: opts.guard,
        algorithm: spec.algorithm,
    };
    let mut outcome = engine.run();
    outcome.elapsed = start.elapsed();
    if let Some(result) = &mut outcome.result {
        result.elapsed = outcome.elapsed;
    }
    outcome
}

struct Engine<'g> {
    g: &'g TemporalGraph,
    u: VertexId,
    k: u32,
    guard: PeelGuard,
    algorithm: Algorithm,
}

impl<'g> Engine<'g> {
    fn run(&self) -> SearchOutcome {
        let times = self.g.times();
        let m = times.len();
        let u_times = self.g.incident_timestamps(self.u);
        let two_ends = |ts, te| {
            u_times.binary_search(&ts).is_ok() && u_times.binary_search(&te).is_ok()
        };

        let mut state = SearchState::default();
        let mut history = Vec::new();
        let mut first_expanded = None;
        let mut processed = 0usize;

        if u_times.is_empty() {
            return SearchOutcome {
                result: None,
                first_expanded,
                best_history: history,
                intervals_processed: 0,
                elapsed: Duration::ZERO,
            };
        }

        let mut frontier =
            vec![CumulativeGraph::build(self.g, Interval::new(times[0], times[m - 1]))];
        let mut first_pending = true;

        for level in 0..m {
            let width = m - level;
            // Breadth-first order within a level: descending start index.
            let mut tasks: Vec<(usize, bool)> = Vec::new();
            for j in (0..frontier.len()).rev() {
                if two_ends(times[j], times[j + width - 1]) {
                    let is_first = first_pending && tasks.is_empty();
                    tasks.push((j, is_first));
                }
            }
            if !tasks.is_empty() {
                first_pending = false;
            }

            // The reference strategy reads the best engagement as of the
            // start of the level, which keeps the outcome independent of
            // how intervals within the level are scheduled.
            let pinned_best = state.best_engagement;
            let results: Vec<IntervalOutcome> = tasks
                .par_iter()
                .map(|&(j, is_first)| self.search_interval(&frontier[j], is_first, pinned_best))
                .collect();

            for (cand, expanded) in results {
                processed += 1;
                if first_expanded.is_none() {
                    first_expanded = expanded;
                }
                if let Some(cand) = cand {
                    state.merge(cand);
                }
                history.push(state.best_engagement);
            }

            if level + 1 < m {
                frontier = self.derive_children(frontier, level, width);
            }
        }

        let result = state.best.map(|cand| CommunityResult {
            vertices: cand.vertices,
            interval: cand.interval,
            engagement: cand.engagement,
            temporal_edge_count: cand.temporal_edges,
            algorithm: self.algorithm,
            elapsed: Duration::ZERO,
        });
        SearchOutcome {
            result,
            first_expanded,
            best_history: history,
            intervals_processed: processed,
            elapsed: Duration::ZERO,
        }
    }

    /// Children of level `level` (parent width `width`, ascending start
    /// index): each parent shrinks right in place, and the last parent also
    /// spawns the left-shrunk child.
    fn derive_children(
        &self,
        mut frontier: Vec<CumulativeGraph>,
        level: usize,
        width: usize,
    ) -> Vec<CumulativeGraph> {
        let times = self.g.times();
        let mut last = frontier[level].clone();
        last.step_start_to(self.g, times[level + 1]);
        for (i, parent) in frontier.iter_mut().enumerate() {
            parent.step_end_to(self.g, times[i + width - 2]);
        }
        frontier.push(last);
        frontier
    }

    fn search_interval(
        &self,
        c: &CumulativeGraph,
        is_first: bool,
        pinned_best: Engagement,
    ) -> IntervalOutcome {
        if self.algorithm == Algorithm::Tdgp {
            return (self.peel(c), None);
        }

        let candidates = match (self.algorithm, is_first) {
            (Algorithm::Buls, true) => naive_candidates(c, self.u, self.k),
            (Algorithm::BulsPlus, true) => {
                advanced_candidates(c, self.u, self.k, ExpandStrategy::Engagement, pinned_best)
            }
            (Algorithm::BulsStar, true) => {
                advanced_candidates(c, self.u, self.k, ExpandStrategy::Occurrence, pinned_best)
            }
            (_, false) => {
                advanced_candidates(c, self.u, self.k, ExpandStrategy::Reference, pinned_best)
            }
            (other, true) => unreachable!("{other} is not a local algorithm"),
        };
        let expanded = is_first.then(|| (candidates.len(), c.vertex_count()));

        let sub = c.induced(&candidates);
        let mut cand = self.peel(&sub);

        // The strategy-driven first expansions can miss every feasible core;
        // regenerate with the naive rule in that case.
        let uses_fallback = matches!(self.algorithm, Algorithm::BulsPlus | Algorithm::BulsStar);
        if cand.is_none() && is_first && uses_fallback {
            let sub = c.induced(&naive_candidates(c, self.u, self.k));
            cand = self.peel(&sub);
        }
        (cand, expanded)
    }

    /// Greedy peel: start from the connected k-core containing the query
    /// vertex and repeatedly delete the live vertex of maximum temporal
    /// degree, scoring every state the guard accepts.
    fn peel(&self, c: &CumulativeGraph) -> Option<IntervalCandidate> {
        let mut s = restrict_to_query_core(c, self.u, self.k)?;
        let mut best = self.snapshot(&s, c.interval());

        // Lazy max-heap over (temporal degree, smallest-id tiebreak); stale
        // entries are re-keyed on pop since degrees only decrease.
        let mut heap: BinaryHeap<(u64, Reverse<VertexId>)> = s
            .live_vertices()
            .into_iter()
            .filter(|&v| v != self.u)
            .map(|v| (s.temporal_degree(v), Reverse(v)))
            .collect();

        while let Some(v) = pop_max_alive(&mut heap, &s) {
            s.remove_vertex(v).expect("peel never removes the query vertex");
            let valid = match self.guard {
                PeelGuard::Revalidate => s.revalidate(self.k),
                PeelGuard::Halt => s.is_connected_query_core(self.k),
            };
            if !valid {
                break;
            }
            let engagement = Engagement::new(s.temporal_degree(self.u), s.temporal_sum());
            if engagement > best.engagement {
                best = self.snapshot(&s, c.interval());
            }
        }
        Some(best)
    }

    fn snapshot(&self, s: &CoreSubgraph<'_>, interval: Interval) -> IntervalCandidate {
        IntervalCandidate {
            engagement: Engagement::new(s.temporal_degree(self.u), s.temporal_sum()),
            vertices: s.live_vertices(),
            interval,
            temporal_edges: s.temporal_edge_count(),
        }
    }
}

/// Pops the live vertex of maximum temporal degree (smallest id on ties),
/// re-keying entries whose degree has dropped since they were pushed.
fn pop_max_alive(
    heap: &mut BinaryHeap<(u64, Reverse<VertexId>)>,
    s: &CoreSubgraph<'_>,
) -> Option<VertexId> {
    while let Some((d, Reverse(v))) = heap.pop() {
        if !s.is_alive(v) {
            continue;
        }
        let current = s.temporal_degree(v);
        if current == d {
            return Some(v);
        }
        debug_assert!(current < d);
        heap.push((current, Reverse(v)));
    }
    None
}

/// Degree-filtered breadth-first candidate set: every vertex reachable from
/// `u` through vertices of static degree at least `k`, plus `u` itself.
pub fn naive_candidates(c: &CumulativeGraph, u: VertexId, k: u32) -> HashSet<VertexId> {
    debug_assert!(c.has_vertex(u));
    let mut set = HashSet::from([u]);
    let mut queue = VecDeque::from([u]);
    while let Some(s) = queue.pop_front() {
        for &(v, _) in c.neighbors(s) {
            if !set.contains(&v) && c.static_degree(v) as u32 >= k {
                set.insert(v);
                queue.push_back(v);
            }
        }
    }
    set
}

/// Strategy-driven candidate set: the query vertex's qualifying neighborhood
/// plus expansions grown from the neighbors that are not internally
/// k-connected.
pub fn advanced_candidates(
    c: &CumulativeGraph,
    u: VertexId,
    k: u32,
    strategy: ExpandStrategy,
    best_result: Engagement,
) -> HashSet<VertexId> {
    debug_assert!(c.has_vertex(u));
    // N: neighbors of u with sufficient static degree, ascending.
    let hood: Vec<VertexId> = c
        .neighbors(u)
        .iter()
        .map(|&(v, _)| v)
        .filter(|&v| c.static_degree(v) as u32 >= k)
        .collect();
    let hood_set: HashSet<VertexId> = hood.iter().copied().collect();

    // Expansion roots: members of N with fewer than k neighbors inside N.
    let roots: Vec<VertexId> = hood
        .iter()
        .copied()
        .filter(|&s| {
            let deg_in_n = c
                .neighbors(s)
                .iter()
                .filter(|&&(y, _)| hood_set.contains(&y))
                .count();
            (deg_in_n as u32) < k
        })
        .collect();

    let mut set: HashSet<VertexId> = hood_set;
    set.insert(u);
    if roots.is_empty() {
        return set;
    }

    match strategy {
        ExpandStrategy::Reference => {
            let (mut d_u, mut sum_d) = induced_sums(c, &set, u);
            for &root in &roots {
                let mut queue = VecDeque::from([root]);
                while let Some(m) = queue.pop_front() {
                    for &(n, w_mn) in c.neighbors(m) {
                        if set.contains(&n) || (c.static_degree(n) as u32) < k {
                            continue;
                        }
                        let frac = Ratio::new(d_u, sum_d + w_mn as u64);
                        if frac > best_result {
                            set.insert(n);
                            let into_set: u64 = c
                                .neighbors(n)
                                .iter()
                                .filter(|&&(y, _)| set.contains(&y))
                                .map(|&(_, w)| w as u64)
                                .sum();
                            sum_d += 2 * into_set;
                            d_u += c.weight(u, n) as u64;
                            queue.push_back(n);
                        }
                    }
                }
            }
        }
        ExpandStrategy::Engagement => {
            // Sums are frozen on the pre-expansion set.
            let (d_u, sum_d) = induced_sums(c, &set, u);
            let base = Ratio::new(d_u, sum_d);
            for &root in &roots {
                let w_root = c.weight(u, root) as u64;
                let mut queue: VecDeque<(VertexId, u64)> = VecDeque::from([(root, 0)]);
                while let Some((m, acc)) = queue.pop_front() {
                    for &(n, w_mn) in c.neighbors(m) {
                        if set.contains(&n) || (c.static_degree(n) as u32) < k {
                            continue;
                        }
                        let grown = Ratio::new(d_u + w_root, sum_d + w_mn as u64 + acc);
                        if grown > base {
                            set.insert(n);
                            queue.push_back((n, acc + w_mn as u64));
                        }
                    }
                }
            }
        }
        ExpandStrategy::Occurrence => {
            expand_by_min_occurrence(c, u, k, &mut set);
        }
    }
    set
}

/// Grows the set one vertex at a time, always admitting the frontier edge of
/// globally minimum weight, until every member has at least `k` neighbors
/// inside the set (or the frontier runs dry).
fn expand_by_min_occurrence(
    c: &CumulativeGraph,
    _u: VertexId,
    k: u32,
    set: &mut HashSet<VertexId>,
) {
    let mut deg_in: HashMap<VertexId, u32> = HashMap::new();
    for &v in set.iter() {
        let d = c
            .neighbors(v)
            .iter()
            .filter(|&&(y, _)| set.contains(&y))
            .count() as u32;
        deg_in.insert(v, d);
    }
    let mut deficient = deg_in.values().filter(|&&d| d < k).count();

    // Min-heap of frontier edges keyed (weight, candidate id); stale entries
    // are skipped on pop.
    let mut heap: BinaryHeap<Reverse<(u32, VertexId)>> = BinaryHeap::new();
    let push_frontier = |heap: &mut BinaryHeap<_>, set: &HashSet<VertexId>, m: VertexId| {
        for &(n, w) in c.neighbors(m) {
            if !set.contains(&n) && c.static_degree(n) as u32 >= k {
                heap.push(Reverse((w, n)));
            }
        }
    };
    for &v in set.iter() {
        push_frontier(&mut heap, set, v);
    }

    while deficient > 0 {
        let Some(Reverse((_, n))) = heap.pop() else {
            break;
        };
        if set.contains(&n) {
            continue;
        }
        set.insert(n);
        let mut own = 0u32;
        for &(y, _) in c.neighbors(n) {
            if set.contains(&y) && y != n {
                own += 1;
                if let Some(d) = deg_in.get_mut(&y) {
                    *d += 1;
                    if *d == k {
                        deficient -= 1;
                    }
                }
            }
        }
        deg_in.insert(n, own);
        if own < k {
            deficient += 1;
        }
        push_frontier(&mut heap, set, n);
    }
}

/// `(d_u, sum of all temporal degrees)` within the subgraph induced by `set`.
fn induced_sums(c: &CumulativeGraph, set: &HashSet<VertexId>, u: VertexId) -> (u64, u64) {
    let mut d_u = 0u64;
    let mut sum = 0u64;
    for &v in set {
        let d: u64 = c
            .neighbors(v)
            .iter()
            .filter(|&&(y, _)| set.contains(&y))
            .map(|&(_, w)| w as u64)
            .sum();
        sum += d;
        if v == u {
            d_u = d;
        }
    }
    (d_u, sum)
}

/// Checks the structural community conditions independently of the search
/// machinery: membership of `u`, connectivity, and minimum static degree `k`
/// on the de-temporal projection restricted to the interval.
pub fn validate_community(
    g: &TemporalGraph,
    vertices: &[VertexId],
    interval: Interval,
    u: VertexId,
    k: u32,
) -> Result<(), String> {
    let set: HashSet<VertexId> = vertices.iter().copied().collect();
    if !set.contains(&u) {
        return Err(format!("query vertex {u} missing from the community"));
    }
    let mut static_adj: HashMap<VertexId, HashSet<VertexId>> = HashMap::new();
    for &v in &set {
        let mut nbrs = HashSet::new();
        for &(y, t) in g.adjacency(v) {
            if interval.contains(t) && set.contains(&y) {
                nbrs.insert(y);
            }
        }
        static_adj.insert(v, nbrs);
    }
    for (&v, nbrs) in &static_adj {
        if (nbrs.len() as u32) < k {
            return Err(format!(
                "vertex {v} has static degree {} < {k} within the community",
                nbrs.len()
            ));
        }
    }
    let mut seen = HashSet::from([u]);
    let mut stack = vec![u];
    while let Some(v) = stack.pop() {
        for &y in &static_adj[&v] {
            if seen.insert(y) {
                stack.push(y);
            }
        }
    }
    if seen.len() != set.len() {
        return Err("community is not connected over its interval".to_string());
    }
    Ok(())
}
