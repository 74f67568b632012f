//! Community quality metrics: engagement level, temporal density, and
//! temporal conductance. All three are exact rationals.

use std::collections::HashSet;
use std::str::FromStr;

use num_rational::Ratio;

use crate::cumulative::Interval;
use crate::error::{Error, Result};
use crate::graph::{TemporalGraph, VertexId};
use crate::search::Engagement;

/// Whether conductance counts temporal edges over the community's interval
/// or over the full timeline.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TcMode {
    #[default]
    Interval,
    Full,
}

impl FromStr for TcMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "interval" => Ok(TcMode::Interval),
            "full" => Ok(TcMode::Full),
            other => Err(format!("unknown tc mode '{other}' (expected interval or full)")),
        }
    }
}

/// The three quality metrics of one community. Conductance is undefined when
/// either side of the cut has no internal temporal edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommunityMetrics {
    pub engagement: Engagement,
    pub temporal_density: Ratio<u64>,
    pub temporal_conductance: Option<Ratio<u64>>,
}

impl CommunityMetrics {
    pub fn engagement_f64(&self) -> f64 {
        ratio_f64(self.engagement)
    }

    pub fn density_f64(&self) -> f64 {
        ratio_f64(self.temporal_density)
    }

    pub fn conductance_f64(&self) -> Option<f64> {
        self.temporal_conductance.map(ratio_f64)
    }
}

fn ratio_f64(r: Ratio<u64>) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

/// Engagement level of `u` in the temporal subgraph induced by `vertices`
/// over `interval`: its temporal degree over the sum of all temporal degrees.
pub fn engagement_level(
    g: &TemporalGraph,
    vertices: &[VertexId],
    interval: Interval,
    u: VertexId,
) -> Result<Engagement> {
    let set: HashSet<VertexId> = vertices.iter().copied().collect();
    if !set.contains(&u) {
        return Err(Error::UndefinedMetric(format!(
            "engagement: vertex {u} is not a community member"
        )));
    }
    let mut total = 0u64;
    let mut d_u = 0u64;
    for &v in &set {
        let d = induced_degree(g, &set, interval, v);
        total += d;
        if v == u {
            d_u = d;
        }
    }
    if total == 0 {
        return Err(Error::UndefinedMetric(
            "engagement: community has no temporal edges".to_string(),
        ));
    }
    Ok(Ratio::new(d_u, total))
}

/// Temporal density: `2·|E_S| / (|S|·(|S|−1)·|T_S|)` where `|T_S|` is the
/// inclusive interval width in time units.
pub fn temporal_density(
    g: &TemporalGraph,
    vertices: &[VertexId],
    interval: Interval,
) -> Result<Ratio<u64>> {
    let set: HashSet<VertexId> = vertices.iter().copied().collect();
    let s = set.len() as u64;
    if s < 2 {
        return Err(Error::UndefinedMetric(
            "temporal density needs at least two vertices".to_string(),
        ));
    }
    let edges: u64 = set
        .iter()
        .map(|&v| induced_degree(g, &set, interval, v))
        .sum::<u64>()
        / 2;
    Ok(Ratio::new(2 * edges, s * (s - 1) * interval.width()))
}

/// Temporal conductance: crossing temporal edges over the smaller internal
/// temporal volume of the two sides of the cut.
pub fn temporal_conductance(
    g: &TemporalGraph,
    vertices: &[VertexId],
    interval: Interval,
    mode: TcMode,
) -> Result<Ratio<u64>> {
    let set: HashSet<VertexId> = vertices.iter().copied().collect();
    let mut cut = 0u64;
    let mut vol_in = 0u64;
    let mut vol_out = 0u64;
    for &(a, b, t) in g.triples() {
        if mode == TcMode::Interval && !interval.contains(t) {
            continue;
        }
        match (set.contains(&a), set.contains(&b)) {
            (true, true) => vol_in += 1,
            (false, false) => vol_out += 1,
            _ => cut += 1,
        }
    }
    let denom = vol_in.min(vol_out);
    if denom == 0 {
        return Err(Error::UndefinedMetric(
            "conductance: one side of the cut has no internal temporal edge".to_string(),
        ));
    }
    Ok(Ratio::new(cut, denom))
}

/// Computes all three metrics; conductance degrades to `None` when undefined.
pub fn community_metrics(
    g: &TemporalGraph,
    vertices: &[VertexId],
    interval: Interval,
    u: VertexId,
    mode: TcMode,
) -> Result<CommunityMetrics> {
    Ok(CommunityMetrics {
        engagement: engagement_level(g, vertices, interval, u)?,
        temporal_density: temporal_density(g, vertices, interval)?,
        temporal_conductance: temporal_conductance(g, vertices, interval, mode).ok(),
    })
}

fn induced_degree(
    g: &TemporalGraph,
    set: &HashSet<VertexId>,
    interval: Interval,
    v: VertexId,
) -> u64 {
    g.adjacency(v)
        .iter()
        .filter(|&&(y, t)| interval.contains(t) && set.contains(&y))
        .count() as u64
}
