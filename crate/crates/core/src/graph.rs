//! Temporal graph data model: timestamped edge ingestion, bucketing, and the
//! static (de-temporal) projection.

use std::collections::BTreeSet;
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use crate::error::{Error, Result};

/// Dense vertex id, contiguous `0..n` after ingestion remapping.
pub type VertexId = u32;

/// Bucketed, non-negative time unit.
pub type Timestamp = u32;

/// Undirected temporal graph: a deduplicated multiset of `(u, v, t)` edge
/// occurrences with `u < v`, plus per-vertex and per-timestamp indexes.
///
/// Immutable after construction; freely shareable across threads.
#[derive(Debug, Clone)]
pub struct TemporalGraph {
    n: usize,
    /// Sorted by `(t, u, v)`, no duplicates, no self-loops.
    triples: Vec<(VertexId, VertexId, Timestamp)>,
    /// Per vertex: `(neighbor, timestamp)` pairs sorted by `(neighbor, timestamp)`.
    adj: Vec<Vec<(VertexId, Timestamp)>>,
    /// Distinct timestamps, ascending.
    times: Vec<Timestamp>,
    /// Edges occurring at `times[i]`.
    edges_by_time: Vec<Vec<(VertexId, VertexId)>>,
    /// Dense id -> original raw id (ascending, since the remap sorts raw ids).
    orig_ids: Vec<u64>,
    time_scale: i64,
    unit_origin: i64,
}

/// Static projection of a temporal graph: an edge `(u, v)` exists iff some
/// `(u, v, t)` exists in the parent graph.
#[derive(Debug, Clone)]
pub struct DetemporalGraph {
    n: usize,
    adj: Vec<Vec<VertexId>>,
    edge_count: usize,
}

impl TemporalGraph {
    /// Ingests raw `(u, v, t)` edges: drops self-loops, normalizes endpoint
    /// order, buckets timestamps by `floor((t - origin) / time_scale)`,
    /// deduplicates triples, and remaps vertex ids to dense `0..n`.
    ///
    /// `origin` defaults to the minimum raw timestamp.
    pub fn from_raw_triples(
        raw: &[(u64, u64, i64)],
        time_scale: i64,
        origin: Option<i64>,
    ) -> Result<Self> {
        assert!(time_scale >= 1, "time_scale must be positive");
        let filtered: Vec<&(u64, u64, i64)> = raw.iter().filter(|(u, v, _)| u != v).collect();
        if filtered.is_empty() {
            return Err(Error::EmptyGraph);
        }
        let unit_origin = origin.unwrap_or_else(|| filtered.iter().map(|t| t.2).min().unwrap());

        let mut raw_ids: BTreeSet<u64> = BTreeSet::new();
        for (u, v, _) in &filtered {
            raw_ids.insert(*u);
            raw_ids.insert(*v);
        }
        let orig_ids: Vec<u64> = raw_ids.into_iter().collect();
        let dense = |raw: u64| orig_ids.binary_search(&raw).unwrap() as VertexId;

        let mut set: BTreeSet<(Timestamp, VertexId, VertexId)> = BTreeSet::new();
        for (u, v, t) in filtered {
            let shifted = t - unit_origin;
            if shifted < 0 {
                return Err(Error::Data(format!(
                    "timestamp {t} precedes the bucketing origin {unit_origin}"
                )));
            }
            let bucket = (shifted / time_scale) as Timestamp;
            let (a, b) = (dense(*u), dense(*v));
            let (a, b) = if a < b { (a, b) } else { (b, a) };
            set.insert((bucket, a, b));
        }

        let triples: Vec<(VertexId, VertexId, Timestamp)> =
            set.into_iter().map(|(t, u, v)| (u, v, t)).collect();
        Ok(Self::assemble(
            orig_ids,
            triples,
            time_scale,
            unit_origin,
        ))
    }

    /// Builds a graph from already-bucketed triples (scale 1, origin 0).
    pub fn from_triples(triples: &[(u64, u64, i64)]) -> Result<Self> {
        Self::from_raw_triples(triples, 1, Some(0))
    }

    /// Loads a whitespace-separated `u v t` edge list. Lines starting with
    /// `#` or `%` and blank lines are ignored.
    pub fn load_edge_list<P: AsRef<Path>>(
        path: P,
        time_scale: i64,
        origin: Option<i64>,
    ) -> Result<Self> {
        let reader = BufReader::new(File::open(path)?);
        let mut raw = Vec::new();
        for (idx, line) in reader.lines().enumerate() {
            let line = line?;
            let lineno = idx + 1;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') || trimmed.starts_with('%') {
                continue;
            }
            let mut fields = trimmed.split_whitespace();
            let (u, v, t) = match (fields.next(), fields.next(), fields.next()) {
                (Some(u), Some(v), Some(t)) => (u, v, t),
                _ => {
                    return Err(Error::Parse {
                        line: lineno,
                        msg: format!("expected 'u v t', got '{trimmed}'"),
                    })
                }
            };
            if fields.next().is_some() {
                return Err(Error::Parse {
                    line: lineno,
                    msg: format!("trailing fields after 'u v t' in '{trimmed}'"),
                });
            }
            let parse_id = |s: &str| {
                s.parse::<u64>().map_err(|_| Error::Parse {
                    line: lineno,
                    msg: format!("invalid vertex id '{s}'"),
                })
            };
            let t = t.parse::<i64>().map_err(|_| Error::Parse {
                line: lineno,
                msg: format!("invalid timestamp '{t}'"),
            })?;
            raw.push((parse_id(u)?, parse_id(v)?, t));
        }
        if raw.is_empty() {
            return Err(Error::EmptyGraph);
        }
        Self::from_raw_triples(&raw, time_scale, origin)
    }

    fn assemble(
        orig_ids: Vec<u64>,
        triples: Vec<(VertexId, VertexId, Timestamp)>,
        time_scale: i64,
        unit_origin: i64,
    ) -> Self {
        let n = orig_ids.len();
        let mut adj = vec![Vec::new(); n];
        let mut times = Vec::new();
        let mut edges_by_time: Vec<Vec<(VertexId, VertexId)>> = Vec::new();
        for &(u, v, t) in &triples {
            adj[u as usize].push((v, t));
            adj[v as usize].push((u, t));
            if times.last() != Some(&t) {
                times.push(t);
                edges_by_time.push(Vec::new());
            }
            edges_by_time.last_mut().unwrap().push((u, v));
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        TemporalGraph {
            n,
            triples,
            adj,
            times,
            edges_by_time,
            orig_ids,
            time_scale,
            unit_origin,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    /// Number of temporal edges (distinct `(u, v, t)` triples).
    pub fn temporal_edge_count(&self) -> usize {
        self.triples.len()
    }

    pub fn triples(&self) -> &[(VertexId, VertexId, Timestamp)] {
        &self.triples
    }

    /// Distinct timestamps carrying edges, ascending.
    pub fn times(&self) -> &[Timestamp] {
        &self.times
    }

    /// `[min(T), max(T)]` over the bucketed timestamps.
    pub fn time_domain(&self) -> (Timestamp, Timestamp) {
        (self.times[0], *self.times.last().unwrap())
    }

    /// Edges occurring exactly at timestamp `t`.
    pub fn edges_at(&self, t: Timestamp) -> &[(VertexId, VertexId)] {
        match self.times.binary_search(&t) {
            Ok(i) => &self.edges_by_time[i],
            Err(_) => &[],
        }
    }

    /// `(neighbor, timestamp)` pairs of `u`, sorted by `(neighbor, timestamp)`.
    pub fn adjacency(&self, u: VertexId) -> &[(VertexId, Timestamp)] {
        &self.adj[u as usize]
    }

    /// Distinct timestamps at which `u` has an incident edge, ascending.
    pub fn incident_timestamps(&self, u: VertexId) -> Vec<Timestamp> {
        let mut ts: Vec<Timestamp> = self.adj[u as usize].iter().map(|&(_, t)| t).collect();
        ts.sort_unstable();
        ts.dedup();
        ts
    }

    /// Occurrence count of the pair `(u, v)` within `[ts, te]` inclusive.
    pub fn edge_occurrences(
        &self,
        u: VertexId,
        v: VertexId,
        ts: Timestamp,
        te: Timestamp,
    ) -> u32 {
        assert!(ts <= te, "interval start must not exceed its end");
        let list = &self.adj[u as usize];
        let lo = list.partition_point(|&(w, t)| (w, t) < (v, ts));
        let hi = list.partition_point(|&(w, t)| (w, t) <= (v, te));
        (hi - lo) as u32
    }

    /// Temporal degree of `u` over `[ts, te]`: total incident occurrences.
    pub fn temporal_degree(&self, u: VertexId, ts: Timestamp, te: Timestamp) -> u64 {
        self.adj[u as usize]
            .iter()
            .filter(|&&(_, t)| t >= ts && t <= te)
            .count() as u64
    }

    /// Static projection obtained by discarding timestamps.
    pub fn detemporalize(&self) -> DetemporalGraph {
        // Adjacency is sorted by (neighbor, timestamp), so occurrences of the
        // same neighbor are consecutive.
        let adj: Vec<Vec<VertexId>> = self
            .adj
            .iter()
            .map(|list| {
                let mut nbrs: Vec<VertexId> = list.iter().map(|&(v, _)| v).collect();
                nbrs.dedup();
                nbrs
            })
            .collect();
        let edge_count = adj.iter().map(Vec::len).sum::<usize>() / 2;
        DetemporalGraph {
            n: self.n,
            adj,
            edge_count,
        }
    }

    /// Original raw id of a dense vertex.
    pub fn original_id(&self, v: VertexId) -> u64 {
        self.orig_ids[v as usize]
    }

    /// Dense id of an original raw id, if present.
    pub fn dense_id(&self, raw: u64) -> Option<VertexId> {
        self.orig_ids.binary_search(&raw).ok().map(|i| i as VertexId)
    }

    pub fn time_scale(&self) -> i64 {
        self.time_scale
    }

    pub fn unit_origin(&self) -> i64 {
        self.unit_origin
    }

    /// Raw timestamp range covered by a bucketed interval.
    pub fn raw_time_range(&self, ts: Timestamp, te: Timestamp) -> (i64, i64) {
        let start = self.unit_origin + ts as i64 * self.time_scale;
        let end = self.unit_origin + (te as i64 + 1) * self.time_scale - 1;
        (start, end)
    }

    /// Writes the canonical triple list: original ids, bucketed timestamps,
    /// one `u v t` line per triple, sorted by `(t, u, v)`.
    pub fn write_canonical<W: Write>(&self, mut w: W) -> Result<()> {
        let mut sorted: Vec<_> = self.triples.iter().collect();
        sorted.sort_unstable_by_key(|&&(u, v, t)| (t, u, v));
        for &(u, v, t) in sorted {
            writeln!(
                w,
                "{} {} {}",
                self.orig_ids[u as usize], self.orig_ids[v as usize], t
            )?;
        }
        Ok(())
    }
}

impl DetemporalGraph {
    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn neighbors(&self, u: VertexId) -> &[VertexId] {
        &self.adj[u as usize]
    }

    pub fn degree(&self, u: VertexId) -> usize {
        self.adj[u as usize].len()
    }
}
