//! Table and json-lines rendering for every subcommand.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use anyhow::{Context, Result};
use serde_json::json;

use secs_core::{
    community_metrics, Algorithm, BenchmarkReport, CommunityResult, EquivalenceReport,
    OracleResult, TcMode, TemporalGraph,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Table,
    Jsonl,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "table" => Ok(Format::Table),
            "jsonl" => Ok(Format::Jsonl),
            other => Err(format!("unknown format '{other}' (expected table or jsonl)")),
        }
    }
}

pub fn print_community(
    g: &TemporalGraph,
    community: &CommunityResult,
    raw_query: u64,
    dense_query: secs_core::VertexId,
    k: u32,
    tc_mode: TcMode,
    format: Format,
) -> Result<()> {
    let metrics = community_metrics(
        g,
        &community.vertices,
        community.interval,
        dense_query,
        tc_mode,
    )?;
    let raw_vertices: Vec<u64> = community
        .vertices
        .iter()
        .map(|&v| g.original_id(v))
        .collect();
    let raw_range = g.raw_time_range(community.interval.start, community.interval.end);

    match format {
        Format::Jsonl => {
            let record = json!({
                "found": true,
                "algorithm": community.algorithm.as_str(),
                "query": raw_query,
                "k": k,
                "vertices": raw_vertices,
                "vertex_count": raw_vertices.len(),
                "interval": {"start": community.interval.start, "end": community.interval.end},
                "raw_interval": {"start": raw_range.0, "end": raw_range.1},
                "engagement": metrics.engagement_f64(),
                "temporal_density": metrics.density_f64(),
                "temporal_conductance": metrics.conductance_f64(),
                "temporal_edges": community.temporal_edge_count,
                "elapsed_us": community.elapsed.as_micros() as u64,
            });
            println!("{record}");
        }
        Format::Table => {
            println!("algorithm            {}", community.algorithm);
            println!("query                {raw_query}");
            println!("k                    {k}");
            println!("vertices             {}", join(&raw_vertices));
            println!("vertex count         {}", raw_vertices.len());
            println!("interval             {}", community.interval);
            println!("raw interval         [{}, {}]", raw_range.0, raw_range.1);
            println!("engagement           {:.6}", metrics.engagement_f64());
            println!("temporal density     {:.6}", metrics.density_f64());
            match metrics.conductance_f64() {
                Some(tc) => println!("temporal conductance {tc:.6}"),
                None => println!("temporal conductance undefined"),
            }
            println!("temporal edges       {}", community.temporal_edge_count);
            println!("elapsed (us)         {}", community.elapsed.as_micros());
        }
    }
    Ok(())
}

pub fn print_no_community(
    raw_query: u64,
    k: u32,
    algorithm: Algorithm,
    format: Format,
) -> Result<()> {
    match format {
        Format::Jsonl => {
            let record = json!({
                "found": false,
                "algorithm": algorithm.as_str(),
                "query": raw_query,
                "k": k,
            });
            println!("{record}");
        }
        Format::Table => {
            println!(
                "no community: vertex {raw_query} sits in no connected {k}-core on any candidate interval"
            );
        }
    }
    Ok(())
}

pub fn print_stats(g: &TemporalGraph, format: Format) -> Result<()> {
    let detemp = g.detemporalize();
    let (lo, hi) = g.time_domain();
    match format {
        Format::Jsonl => {
            let record = json!({
                "vertices": g.vertex_count(),
                "temporal_edges": g.temporal_edge_count(),
                "static_edges": detemp.edge_count(),
                "timestamps": g.times().len(),
                "time_domain": {"start": lo, "end": hi},
                "time_scale": g.time_scale(),
                "origin": g.unit_origin(),
            });
            println!("{record}");
        }
        Format::Table => {
            println!("vertices        {}", g.vertex_count());
            println!("temporal edges  {}", g.temporal_edge_count());
            println!("static edges    {}", detemp.edge_count());
            println!("timestamps      {}", g.times().len());
            println!("time domain     [{lo}, {hi}]");
        }
    }
    Ok(())
}

pub fn print_report(report: &BenchmarkReport, format: Format) -> Result<()> {
    match format {
        Format::Jsonl => {
            for record in &report.records {
                println!("{}", serde_json::to_string(record)?);
            }
            for summary in &report.summaries {
                println!("{}", serde_json::to_string(summary)?);
            }
        }
        Format::Table => {
            let headers = [
                "algorithm",
                "query",
                "k",
                "found",
                "interval",
                "|V|",
                "EL",
                "TD",
                "TC",
                "elapsed_us",
                "expanded",
                "dominated",
            ];
            let rows: Vec<Vec<String>> = report
                .records
                .iter()
                .map(|r| {
                    vec![
                        r.algorithm.to_string(),
                        r.query.to_string(),
                        r.k.to_string(),
                        r.found.to_string(),
                        r.interval.map_or("-".into(), |iv| iv.to_string()),
                        r.vertex_count.to_string(),
                        opt_f(r.engagement),
                        opt_f(r.temporal_density),
                        opt_f(r.temporal_conductance),
                        r.elapsed_us.to_string(),
                        opt_f(r.expanded_fraction),
                        r.dominance_ok
                            .map_or("-".into(), |ok| ok.to_string()),
                    ]
                })
                .collect();
            print!("{}", render_table(&headers, &rows));

            println!();
            let headers = [
                "algorithm",
                "queries",
                "found",
                "errors",
                "mean_elapsed_us",
                "mean_EL",
                "mean_TD",
                "mean_TC",
                "mean_expanded",
                "excluded(EL/TD/TC)",
                "dominance",
            ];
            let rows: Vec<Vec<String>> = report
                .summaries
                .iter()
                .map(|s| {
                    vec![
                        s.algorithm.to_string(),
                        s.queries.to_string(),
                        s.communities_found.to_string(),
                        s.errors.to_string(),
                        format!("{:.1}", s.mean_elapsed_us),
                        opt_f(s.mean_engagement),
                        opt_f(s.mean_temporal_density),
                        opt_f(s.mean_temporal_conductance),
                        opt_f(s.mean_expanded_fraction),
                        format!(
                            "{}/{}/{}",
                            s.excluded_engagement, s.excluded_density, s.excluded_conductance
                        ),
                        s.dominance_all
                            .map_or("-".into(), |ok| if ok { "all-ok" } else { "VIOLATED" }.into()),
                    ]
                })
                .collect();
            print!("{}", render_table(&headers, &rows));

            for note in &report.notes {
                println!("note: {note}");
            }
        }
    }
    Ok(())
}

pub fn write_records(path: &Path, report: &BenchmarkReport) -> Result<()> {
    let mut w = BufWriter::new(
        File::create(path).with_context(|| format!("cannot create {}", path.display()))?,
    );
    for record in &report.records {
        writeln!(w, "{}", serde_json::to_string(record)?)?;
    }
    Ok(())
}

pub fn print_oracle_check(
    g: &TemporalGraph,
    report: &EquivalenceReport,
    exact: Option<&(u64, OracleResult)>,
    format: Format,
) -> Result<()> {
    match format {
        Format::Jsonl => {
            let record = json!({
                "check": "incremental-equivalence",
                "trials": report.trials_run,
                "passed": report.passed(),
                "failure": report.failure,
            });
            println!("{record}");
            if let Some((raw_query, oracle)) = exact {
                let record = json!({
                    "check": "exact-optimum",
                    "query": raw_query,
                    "found": oracle.optimum.is_some(),
                    "engagement": oracle.optimum.as_ref().map(|o| o.engagement_f64()),
                    "engagement_with_interval_pruning": oracle
                        .pruned_engagement_f64(),
                    "vertices": oracle.optimum.as_ref().map(|o| {
                        o.vertices.iter().map(|&v| g.original_id(v)).collect::<Vec<_>>()
                    }),
                    "interval": oracle.optimum.as_ref().map(|o| {
                        json!({"start": o.interval.start, "end": o.interval.end})
                    }),
                    "candidates_examined": oracle.candidates_examined,
                });
                println!("{record}");
            }
        }
        Format::Table => {
            match &report.failure {
                None => println!(
                    "incremental equivalence: PASS ({} trials)",
                    report.trials_run
                ),
                Some(msg) => println!(
                    "incremental equivalence: FAIL after {} trials\n  {msg}",
                    report.trials_run
                ),
            }
            if let Some((raw_query, oracle)) = exact {
                match &oracle.optimum {
                    Some(opt) => {
                        let verts: Vec<u64> =
                            opt.vertices.iter().map(|&v| g.original_id(v)).collect();
                        println!("exact optimum for {raw_query}:");
                        println!("  engagement {:.6}", opt.engagement_f64());
                        match oracle.pruned_engagement_f64() {
                            Some(p) => println!("  with two-ends interval pruning {p:.6}"),
                            None => println!("  with two-ends interval pruning: no community"),
                        }
                        println!("  vertices   {}", join(&verts));
                        println!("  interval   {}", opt.interval);
                        println!("  examined   {}", oracle.candidates_examined);
                    }
                    None => println!("exact optimum for {raw_query}: no community"),
                }
            }
        }
    }
    Ok(())
}

fn opt_f(v: Option<f64>) -> String {
    v.map_or("-".into(), |x| format!("{x:.5}"))
}

fn join(values: &[u64]) -> String {
    values
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn render_table(headers: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = headers.iter().map(|h| h.len()).collect();
    for row in rows {
        for (i, cell) in row.iter().enumerate() {
            widths[i] = widths[i].max(cell.len());
        }
    }
    let mut out = String::new();
    let render_row = |cells: Vec<String>, widths: &[usize]| {
        cells
            .iter()
            .enumerate()
            .map(|(i, c)| format!("{:<width$}", c, width = widths[i]))
            .collect::<Vec<_>>()
            .join("  ")
            .trim_end()
            .to_string()
    };
    out.push_str(&render_row(
        headers.iter().map(|h| h.to_string()).collect(),
        &widths,
    ));
    out.push('\n');
    for row in rows {
        out.push_str(&render_row(row.clone(), &widths));
        out.push('\n');
    }
    out
}
