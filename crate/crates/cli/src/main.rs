//! `secs`: community search on temporal graphs from the command line.

mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use secs_core::{
    check_incremental_equivalence, exact_secs, run_benchmark, run_query, Algorithm,
    BenchmarkPlan, DerivedRecipe, OracleLimits, PeelGuard, QuerySpec, SearchOptions, TcMode,
    TemporalGraph,
};

#[derive(Parser)]
#[command(
    name = "secs",
    about = "Significant-engagement community search on temporal graphs",
    long_about = "Finds the temporal subgraph around a query vertex whose static projection \
                  is a connected k-core and in which the query vertex's engagement level is \
                  maximized.\n\nExit codes: 0 success, 1 usage or data error, 2 no community \
                  exists for the query.",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct InputArgs {
    /// Edge list file: one "u v t" triple per line; '#'/'%' lines ignored
    #[arg(long, value_name = "PATH")]
    input: PathBuf,

    /// Bucket width for raw timestamps
    #[arg(long, value_name = "N", default_value_t = 1)]
    time_scale: i64,

    /// Bucketing origin; defaults to the minimum raw timestamp
    #[arg(long, value_name = "N")]
    origin: Option<i64>,
}

impl InputArgs {
    fn load(&self) -> Result<TemporalGraph> {
        if self.time_scale < 1 {
            bail!("--time-scale must be at least 1");
        }
        TemporalGraph::load_edge_list(&self.input, self.time_scale, self.origin)
            .with_context(|| format!("failed to load {}", self.input.display()))
    }
}

#[derive(Args)]
struct RunArgs {
    /// Peeling loop guard
    #[arg(long, value_name = "revalidate|halt", default_value = "revalidate")]
    guard: String,

    /// Interval restriction for temporal conductance
    #[arg(long, value_name = "interval|full", default_value = "interval")]
    tc_mode: String,

    /// Worker threads (default: available parallelism)
    #[arg(long, value_name = "N")]
    threads: Option<usize>,

    /// Output format
    #[arg(long, value_name = "table|jsonl", default_value = "table")]
    format: String,
}

impl RunArgs {
    fn options(&self) -> Result<SearchOptions> {
        let guard: PeelGuard = self.guard.parse().map_err(anyhow::Error::msg)?;
        Ok(SearchOptions { guard })
    }

    fn tc_mode(&self) -> Result<TcMode> {
        self.tc_mode.parse().map_err(anyhow::Error::msg)
    }

    fn format(&self) -> Result<output::Format> {
        self.format.parse().map_err(anyhow::Error::msg)
    }

    fn install_thread_pool(&self) -> Result<()> {
        if let Some(n) = self.threads {
            if n == 0 {
                bail!("--threads must be at least 1");
            }
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global()
                .context("thread pool already configured")?;
        }
        Ok(())
    }
}

#[derive(Subcommand)]
enum Command {
    /// Search the community of a single query vertex
    Query {
        #[command(flatten)]
        input: InputArgs,

        /// Query vertex (original id from the input file)
        #[arg(long, value_name = "ID")]
        query: u64,

        /// Minimum degree of every community member
        #[arg(long, default_value_t = 2)]
        k: u32,

        /// Algorithm: tdgp, buls, buls+, buls*, or exact
        #[arg(long, default_value = "tdgp")]
        algo: String,

        #[command(flatten)]
        run: RunArgs,
    },
    /// Run every planned algorithm over a sampled query workload
    Bench {
        #[command(flatten)]
        input: InputArgs,

        /// Number of query vertices to sample
        #[arg(long, default_value_t = 100)]
        queries: usize,

        /// Core parameter; repeat for several values
        #[arg(long, value_name = "N")]
        k: Vec<u32>,

        /// Algorithm to run; repeat for several (default: all four greedy)
        #[arg(long, value_name = "ALGO")]
        algo: Vec<String>,

        /// Seed for query sampling and derived graphs
        #[arg(long, default_value_t = 42)]
        seed: u64,

        /// Derive a time-rescaled graph with this factor before benching
        #[arg(long, value_name = "N", conflicts_with = "vns")]
        vts: Option<u32>,

        /// Derive the induced subgraph of a vertex sample of this fraction
        #[arg(long, value_name = "F", conflicts_with = "vts")]
        vns: Option<f64>,

        /// Also run the exact oracle per query and report dominance
        #[arg(long)]
        oracle: bool,

        /// Sample query vertices regardless of their degree
        #[arg(long)]
        no_query_filter: bool,

        /// Also write the per-query records to this file (json-lines)
        #[arg(long, value_name = "PATH")]
        records: Option<PathBuf>,

        #[command(flatten)]
        run: RunArgs,
    },
    /// Print the graph's size statistics
    Stats {
        #[command(flatten)]
        input: InputArgs,

        /// Output format
        #[arg(long, value_name = "table|jsonl", default_value = "table")]
        format: String,
    },
    /// Verify incremental cumulative-graph updates against rebuilds
    OracleCheck {
        #[command(flatten)]
        input: InputArgs,

        /// Number of random shrink chains to verify
        #[arg(long, default_value_t = 100)]
        trials: usize,

        /// Seed for the random chains
        #[arg(long, default_value_t = 42)]
        seed: u64,

        /// Also solve this query vertex exactly and print the optimum
        #[arg(long, value_name = "ID")]
        query: Option<u64>,

        /// Core parameter for --query
        #[arg(long, default_value_t = 2)]
        k: u32,

        /// Output format
        #[arg(long, value_name = "table|jsonl", default_value = "table")]
        format: String,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Query {
            input,
            query,
            k,
            algo,
            run,
        } => cmd_query(input, query, k, &algo, run),
        Command::Bench {
            input,
            queries,
            k,
            algo,
            seed,
            vts,
            vns,
            oracle,
            no_query_filter,
            records,
            run,
        } => cmd_bench(
            input,
            queries,
            k,
            algo,
            seed,
            vts,
            vns,
            oracle,
            no_query_filter,
            records,
            run,
        ),
        Command::Stats { input, format } => cmd_stats(input, &format),
        Command::OracleCheck {
            input,
            trials,
            seed,
            query,
            k,
            format,
        } => cmd_oracle_check(input, trials, seed, query, k, &format),
    }
}

fn cmd_query(input: InputArgs, query: u64, k: u32, algo: &str, run: RunArgs) -> Result<ExitCode> {
    if k < 1 {
        bail!("--k must be at least 1");
    }
    let algorithm: Algorithm = algo.parse().map_err(anyhow::Error::msg)?;
    let format = run.format()?;
    let tc_mode = run.tc_mode()?;
    let options = run.options()?;
    run.install_thread_pool()?;

    let g = input.load()?;
    let vertex = g
        .dense_id(query)
        .with_context(|| format!("unknown vertex id {query}"))?;

    let result = if algorithm == Algorithm::Exact {
        let oracle = exact_secs(&g, vertex, k, &OracleLimits::default())?;
        oracle.optimum
    } else {
        run_query(
            &g,
            &QuerySpec {
                vertex,
                k,
                algorithm,
            },
            &options,
        )
        .result
    };

    match result {
        Some(community) => {
            output::print_community(&g, &community, query, vertex, k, tc_mode, format)?;
            Ok(ExitCode::SUCCESS)
        }
        None => {
            output::print_no_community(query, k, algorithm, format)?;
            Ok(ExitCode::from(2))
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_bench(
    input: InputArgs,
    queries: usize,
    ks: Vec<u32>,
    algos: Vec<String>,
    seed: u64,
    vts: Option<u32>,
    vns: Option<f64>,
    oracle: bool,
    no_query_filter: bool,
    records_path: Option<PathBuf>,
    run: RunArgs,
) -> Result<ExitCode> {
    if queries < 1 {
        bail!("--queries must be at least 1");
    }
    let format = run.format()?;
    let tc_mode = run.tc_mode()?;
    let options = run.options()?;
    run.install_thread_pool()?;

    let algorithms = if algos.is_empty() {
        Algorithm::heuristics().to_vec()
    } else {
        algos
            .iter()
            .map(|s| s.parse::<Algorithm>().map_err(anyhow::Error::msg))
            .collect::<Result<Vec<_>>>()?
    };
    let ks = if ks.is_empty() { vec![2] } else { ks };
    if let Some(&bad) = ks.iter().find(|&&k| k < 1) {
        bail!("--k must be at least 1, got {bad}");
    }
    let derived = match (vts, vns) {
        (Some(factor), None) => {
            if factor < 1 {
                bail!("--vts must be at least 1");
            }
            DerivedRecipe::Vts(factor)
        }
        (None, Some(fraction)) => {
            if !(fraction > 0.0 && fraction <= 1.0) {
                bail!("--vns must lie in (0, 1]");
            }
            DerivedRecipe::Vns(fraction)
        }
        (None, None) => DerivedRecipe::None,
        (Some(_), Some(_)) => unreachable!("clap rejects the combination"),
    };

    let g = input.load()?;
    let plan = BenchmarkPlan {
        query_count: queries,
        ks,
        algorithms,
        seed,
        derived,
        include_oracle: oracle,
        oracle_limits: OracleLimits::default(),
        options,
        tc_mode,
        filter_queries: !no_query_filter,
    };
    let report = run_benchmark(&g, &plan)?;

    if let Some(path) = records_path {
        output::write_records(&path, &report)?;
    }
    output::print_report(&report, format)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_stats(input: InputArgs, format: &str) -> Result<ExitCode> {
    let format: output::Format = format.parse().map_err(anyhow::Error::msg)?;
    let g = input.load()?;
    output::print_stats(&g, format)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_oracle_check(
    input: InputArgs,
    trials: usize,
    seed: u64,
    query: Option<u64>,
    k: u32,
    format: &str,
) -> Result<ExitCode> {
    let format: output::Format = format.parse().map_err(anyhow::Error::msg)?;
    let g = input.load()?;
    let report = check_incremental_equivalence(&g, trials, seed);
    let exact = match query {
        Some(raw) => {
            let vertex = g
                .dense_id(raw)
                .with_context(|| format!("unknown vertex id {raw}"))?;
            Some((raw, exact_secs(&g, vertex, k, &OracleLimits::default())?))
        }
        None => None,
    };
    let passed = report.passed();
    output::print_oracle_check(&g, &report, exact.as_ref(), format)?;
    Ok(if passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}
