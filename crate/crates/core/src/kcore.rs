//! k-core computation over cumulative graphs and the mutable peeling state
//! shared by all search algorithms.
//!
//! Core membership is decided on static degree (distinct neighbors); temporal
//! degrees are tracked alongside because the greedy peel removes by them.

use crate::cumulative::CumulativeGraph;
use crate::error::{Error, Result};
use crate::graph::VertexId;

/// Live view over a [`CumulativeGraph`] with vertices progressively removed.
#[derive(Debug, Clone)]
pub struct CoreSubgraph<'c> {
    cum: &'c CumulativeGraph,
    alive: Vec<bool>,
    static_deg: Vec<u32>,
    temporal_deg: Vec<u64>,
    /// Alive vertex ids, ascending; may contain dead entries until compacted.
    roster: Vec<VertexId>,
    alive_count: usize,
    /// Sum of live temporal degrees (= twice the live occurrence count).
    temporal_sum: u64,
    query: Option<VertexId>,
    /// Alive ex-neighbors of vertices killed since the last validation.
    dirty: Vec<VertexId>,
    /// Spanning tree rooted at the query vertex; while every removal since
    /// the last rebuild was a tree leaf, the live set is provably connected.
    tree_parent: Vec<VertexId>,
    tree_children: Vec<u32>,
    tree_valid: bool,
    visit_mark: Vec<u32>,
    visit_epoch: u32,
}

const NO_PARENT: VertexId = VertexId::MAX;

impl<'c> CoreSubgraph<'c> {
    fn from_present(cum: &'c CumulativeGraph) -> Self {
        let n = cum.id_space();
        let mut alive = vec![false; n];
        let mut static_deg = vec![0u32; n];
        let mut temporal_deg = vec![0u64; n];
        let mut roster = Vec::with_capacity(cum.vertex_count());
        let mut temporal_sum = 0u64;
        for v in 0..n as VertexId {
            if cum.has_vertex(v) {
                alive[v as usize] = true;
                static_deg[v as usize] = cum.static_degree(v) as u32;
                temporal_deg[v as usize] = cum.temporal_degree(v);
                temporal_sum += temporal_deg[v as usize];
                roster.push(v);
            }
        }
        CoreSubgraph {
            cum,
            alive,
            static_deg,
            temporal_deg,
            alive_count: roster.len(),
            roster,
            temporal_sum,
            query: None,
            dirty: Vec::new(),
            tree_parent: vec![NO_PARENT; n],
            tree_children: vec![0; n],
            tree_valid: false,
            visit_mark: vec![0; n],
            visit_epoch: 0,
        }
    }

    pub fn is_alive(&self, v: VertexId) -> bool {
        self.alive[v as usize]
    }

    pub fn alive_count(&self) -> usize {
        self.alive_count
    }

    pub fn static_degree(&self, v: VertexId) -> u32 {
        self.static_deg[v as usize]
    }

    pub fn temporal_degree(&self, v: VertexId) -> u64 {
        self.temporal_deg[v as usize]
    }

    /// Sum of live temporal degrees.
    pub fn temporal_sum(&self) -> u64 {
        self.temporal_sum
    }

    /// Number of temporal edges induced by the live vertex set.
    pub fn temporal_edge_count(&self) -> u64 {
        self.temporal_sum / 2
    }

    /// Live vertex ids, ascending.
    pub fn live_vertices(&self) -> Vec<VertexId> {
        self.roster
            .iter()
            .copied()
            .filter(|&v| self.alive[v as usize])
            .collect()
    }

    /// Live vertex (other than the query vertex) with the maximum temporal
    /// degree; ties broken towards the smallest id. `None` when nothing but
    /// the query vertex remains.
    pub fn max_temporal_vertex(&self) -> Option<VertexId> {
        let mut best: Option<(u64, VertexId)> = None;
        for &v in &self.roster {
            if !self.alive[v as usize] || Some(v) == self.query {
                continue;
            }
            let d = self.temporal_deg[v as usize];
            let better = match best {
                None => true,
                Some((bd, bv)) => d > bd || (d == bd && v < bv),
            };
            if better {
                best = Some((d, v));
            }
        }
        best.map(|(_, v)| v)
    }

    fn kill(&mut self, v: VertexId, track_dirty: bool) {
        debug_assert!(self.alive[v as usize]);
        for &(y, w) in self.cum.neighbors(v) {
            if self.alive[y as usize] {
                self.static_deg[y as usize] -= 1;
                self.temporal_deg[y as usize] -= w as u64;
                self.temporal_sum -= w as u64;
                if track_dirty {
                    self.dirty.push(y);
                }
            }
        }
        self.temporal_sum -= self.temporal_deg[v as usize];
        self.alive[v as usize] = false;
        self.alive_count -= 1;
        if self.tree_valid {
            if self.tree_children[v as usize] > 0 {
                self.tree_valid = false;
            } else {
                let p = self.tree_parent[v as usize];
                if p != NO_PARENT {
                    self.tree_children[p as usize] -= 1;
                }
            }
        }
    }

    fn compact(&mut self) {
        if self.alive_count * 2 < self.roster.len() {
            let alive = &self.alive;
            self.roster.retain(|&v| alive[v as usize]);
        }
    }

    /// Removes a single live vertex without cascading; the caller re-validates
    /// the core property afterwards.
    pub fn remove_vertex(&mut self, v: VertexId) -> Result<()> {
        if Some(v) == self.query {
            return Err(Error::RemoveQueryVertex);
        }
        assert!(self.alive[v as usize], "vertex {v} is not alive");
        self.kill(v, true);
        self.compact();
        Ok(())
    }

    /// Cascades sub-`k` removals, then restricts to the component of the
    /// query vertex. Returns false (state exhausted) if the query vertex dies.
    ///
    /// The component scan is skipped while the spanning tree certifies
    /// connectivity, which holds as long as every removal was a tree leaf.
    pub fn revalidate(&mut self, k: u32) -> bool {
        let query = self.query.expect("revalidate requires a query vertex");
        self.cascade_from_dirty(k);
        if !self.alive[query as usize] {
            return false;
        }
        if !self.tree_valid {
            self.restrict_to_component(query);
        }
        true
    }

    /// Cascade seeded by a full scan; initial core computation only.
    fn cascade_full(&mut self, k: u32) {
        let queue: Vec<VertexId> = self
            .roster
            .iter()
            .copied()
            .filter(|&v| self.alive[v as usize] && self.static_deg[v as usize] < k)
            .collect();
        self.run_cascade(queue, k);
    }

    /// Cascade seeded by the vertices whose degree changed since the last
    /// validation; only those can newly violate the degree bound.
    fn cascade_from_dirty(&mut self, k: u32) {
        let mut queue: Vec<VertexId> = Vec::new();
        for i in 0..self.dirty.len() {
            let v = self.dirty[i];
            if self.alive[v as usize] && self.static_deg[v as usize] < k {
                queue.push(v);
            }
        }
        self.dirty.clear();
        self.run_cascade(queue, k);
    }

    fn run_cascade(&mut self, mut queue: Vec<VertexId>, k: u32) {
        while let Some(v) = queue.pop() {
            if !self.alive[v as usize] {
                continue;
            }
            for &(y, _) in self.cum.neighbors(v) {
                if self.alive[y as usize] && self.static_deg[y as usize] == k {
                    queue.push(y);
                }
            }
            self.kill(v, false);
        }
        self.compact();
    }

    /// Restricts the live set to the component of `origin`, rebuilding the
    /// connectivity-certifying spanning tree in the same traversal.
    ///
    /// The frontier expands lowest-temporal-degree-first, which leaves the
    /// high-degree vertices childless: the greedy peel then keeps removing
    /// tree leaves and the certificate survives many steps per rebuild.
    fn restrict_to_component(&mut self, origin: VertexId) {
        for &v in &self.roster {
            if self.alive[v as usize] {
                self.tree_children[v as usize] = 0;
            }
        }
        self.visit_epoch += 1;
        let epoch = self.visit_epoch;
        let mut frontier: std::collections::BinaryHeap<std::cmp::Reverse<(u64, VertexId)>> =
            std::collections::BinaryHeap::new();
        frontier.push(std::cmp::Reverse((
            self.temporal_deg[origin as usize],
            origin,
        )));
        self.visit_mark[origin as usize] = epoch;
        self.tree_parent[origin as usize] = NO_PARENT;
        let mut reached = 1usize;
        while let Some(std::cmp::Reverse((_, v))) = frontier.pop() {
            for &(y, _) in self.cum.neighbors(v) {
                if self.alive[y as usize] && self.visit_mark[y as usize] != epoch {
                    self.visit_mark[y as usize] = epoch;
                    self.tree_parent[y as usize] = v;
                    self.tree_children[v as usize] += 1;
                    reached += 1;
                    frontier.push(std::cmp::Reverse((self.temporal_deg[y as usize], y)));
                }
            }
        }
        self.tree_valid = true;
        if reached != self.alive_count {
            let unreachable: Vec<VertexId> = self
                .roster
                .iter()
                .copied()
                .filter(|&v| self.alive[v as usize] && self.visit_mark[v as usize] != epoch)
                .collect();
            // vertices outside the tree carry no tree edges; killing them
            // cannot invalidate it
            for v in unreachable {
                self.tree_parent[v as usize] = NO_PARENT;
                self.tree_children[v as usize] = 0;
                self.kill(v, false);
            }
            self.compact();
        }
        self.dirty.clear();
    }

    /// True when the live set contains the query vertex, is connected, and
    /// every live vertex has static degree at least `k`. Does not mutate the
    /// membership state.
    pub fn is_connected_query_core(&mut self, k: u32) -> bool {
        let query = self.query.expect("check requires a query vertex");
        self.dirty.clear();
        if !self.alive[query as usize] {
            return false;
        }
        if self
            .roster
            .iter()
            .any(|&v| self.alive[v as usize] && self.static_deg[v as usize] < k)
        {
            return false;
        }
        self.visit_epoch += 1;
        let epoch = self.visit_epoch;
        let mut stack = vec![query];
        self.visit_mark[query as usize] = epoch;
        let mut reached = 1usize;
        while let Some(v) = stack.pop() {
            for &(y, _) in self.cum.neighbors(v) {
                if self.alive[y as usize] && self.visit_mark[y as usize] != epoch {
                    self.visit_mark[y as usize] = epoch;
                    reached += 1;
                    stack.push(y);
                }
            }
        }
        reached == self.alive_count
    }
}

/// Maximal subgraph of `c` in which every vertex has at least `k` distinct
/// neighbors, computed by cascading removal. May be empty.
pub fn k_core(c: &CumulativeGraph, k: u32) -> CoreSubgraph<'_> {
    assert!(k >= 1, "k must be positive");
    let mut s = CoreSubgraph::from_present(c);
    s.cascade_full(k);
    s.dirty.clear();
    s
}

/// The connected k-core containing `u`: [`k_core`] restricted to the
/// component of `u`. `None` when `u` does not survive the core.
pub fn restrict_to_query_core(
    c: &CumulativeGraph,
    u: VertexId,
    k: u32,
) -> Option<CoreSubgraph<'_>> {
    let mut s = k_core(c, k);
    s.query = Some(u);
    if !s.is_alive(u) {
        return None;
    }
    s.restrict_to_component(u);
    Some(s)
}
