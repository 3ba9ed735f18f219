//! `pooltest`: cost tables, line simulations and graph pooling experiments.
//!
//! CSV goes to stdout and diagnostics to stderr. Exit status is 0 on
//! success, 1 on invalid input and 2 when a dataset file is missing.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use pooltest::cost_model::{cost_markov, ModelParams, DEFAULT_M_MAX};
use pooltest::datasets::Dataset;
use pooltest::experiment::{run_graph_experiment_with, GraphExperimentConfig, StrategyKind};
use pooltest::graph_io::{compute_stats, Cleanup};
use pooltest::line_sim::{estimate_cost, estimate_random_pooling_cost, ArrivalConfig};
use pooltest::pooling::hierarchical_pooling;
use pooltest::report::{line_sim_row, records_csv, stats_csv, summary_csv, LINE_SIM_HEADER};
use pooltest::sampled_graph::SampledGraph;
use pooltest::tables::{render_csv, TableKind};
use pooltest::Error;

#[derive(Debug, Parser)]
#[command(
    name = "pooltest",
    version,
    about = "Dorfman pooled testing with correlated samples"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print one of the cost tables over r1 = 1..10% and omega = 0..0.9.
    Tables {
        /// cost | saving | size_opt | cost_opt | saving_opt
        #[arg(long)]
        table: TableKind,
        /// Largest group size searched by the optimal-size tables.
        #[arg(long, default_value_t = DEFAULT_M_MAX)]
        m_max: usize,
    },
    /// Simulate the sample line and compare with the closed form.
    LineSim(LineSimArgs),
    /// Run cascades on a graph and score them under a pooling strategy.
    Graph(GraphArgs),
    /// Descriptive statistics of one or more datasets.
    Stats {
        #[arg(long = "dataset", required = true)]
        datasets: Vec<String>,
        #[arg(long)]
        cleanup: Option<Cleanup>,
        /// Seed of the synthetic small-world graph.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, Args)]
struct LineSimArgs {
    /// Prevalence rate.
    #[arg(long)]
    r1: f64,
    #[arg(long)]
    omega: f64,
    /// Pooling group size.
    #[arg(long = "M")]
    m: usize,
    /// Number of pools to simulate.
    #[arg(long, alias = "num-groups", default_value_t = 1_000_000)]
    runs: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Shuffle the line before pooling.
    #[arg(long)]
    shuffle: bool,
}

#[derive(Debug, Args)]
struct GraphArgs {
    /// karate | small-world | email-eu-core | polblogs | ego-facebook | FILE
    #[arg(long)]
    dataset: String,
    #[arg(long, default_value = "hier")]
    strategy: StrategyKind,
    /// Seed counts, `A..B` inclusive or a single number.
    #[arg(long, default_value = "1..5", value_parser = parse_range)]
    num_seeds: (usize, usize),
    #[arg(long, default_value_t = 0.1)]
    phi: f64,
    #[arg(long, default_value_t = 2)]
    depth: usize,
    #[arg(long)]
    cleanup: Option<Cleanup>,
    #[arg(long, default_value_t = 10_000)]
    runs: usize,
    #[arg(long = "M", default_value_t = 10)]
    m: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Also write per-run records as CSV.
    #[arg(long)]
    records: Option<PathBuf>,
    /// Also write the hierarchical merge log as CSV.
    #[arg(long)]
    dendrogram: Option<PathBuf>,
}

fn parse_range(s: &str) -> Result<(usize, usize), String> {
    let parse = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("`{t}`: {e}"));
    match s.split_once("..") {
        Some((a, b)) => Ok((parse(a)?, parse(b.trim_start_matches('='))?)),
        None => parse(s).map(|v| (v, v)),
    }
}

fn run(command: Command, out: &mut impl Write) -> Result<(), Error> {
    match command {
        Command::Tables { table, m_max } => out.write_all(render_csv(table, m_max)?.as_bytes())?,
        Command::LineSim(a) => {
            let params = ModelParams::two_type(a.r1, a.omega)?;
            let closed_form = cost_markov(&params, a.m)?;
            let cfg = ArrivalConfig::markov(params, a.m, a.runs, a.seed);
            let est = if a.shuffle {
                estimate_random_pooling_cost(&cfg)?
            } else {
                estimate_cost(&cfg)?
            };
            writeln!(out, "{LINE_SIM_HEADER}")?;
            writeln!(
                out,
                "{}",
                line_sim_row(a.r1, a.omega, a.m, a.seed, &est, closed_form)
            )?;
        }
        Command::Graph(a) => graph(a, out)?,
        Command::Stats {
            datasets,
            cleanup,
            seed,
        } => {
            let mut rows = Vec::new();
            for name in &datasets {
                let dataset = Dataset::resolve(name);
                let graph = dataset.load(cleanup, seed)?;
                eprintln!(
                    "{}: {} nodes, {} edges",
                    dataset.name(),
                    graph.num_nodes(),
                    graph.num_edges()
                );
                rows.push((dataset.name(), compute_stats(&graph)));
            }
            let rows: Vec<(&str, _)> = rows.iter().map(|(n, s)| (n.as_str(), *s)).collect();
            out.write_all(stats_csv(&rows).as_bytes())?;
        }
    }
    Ok(())
}

fn graph(a: GraphArgs, out: &mut impl Write) -> Result<(), Error> {
    let dataset = Dataset::resolve(&a.dataset);
    let graph = dataset.load(a.cleanup, a.seed)?;
    eprintln!(
        "{}: {} nodes, {} edges",
        dataset.name(),
        graph.num_nodes(),
        graph.num_edges()
    );
    let config = GraphExperimentConfig {
        pool_size: a.m,
        min_seeds: a.num_seeds.0,
        max_seeds: a.num_seeds.1,
        runs: a.runs,
        phi: a.phi,
        depth: a.depth,
        strategy: a.strategy,
        seed: a.seed,
    };
    let hier = if a.strategy == StrategyKind::Hierarchical || a.dendrogram.is_some() {
        let (sigma, dendrogram) = hierarchical_pooling(&SampledGraph::new(&graph)?)?;
        if let Some(path) = &a.dendrogram {
            dendrogram.write_csv(BufWriter::new(File::create(path)?))?;
        }
        Some(sigma)
    } else {
        None
    };
    let report = run_graph_experiment_with(&graph, &dataset.name(), &config, hier.as_ref())?;
    if let Some(path) = &a.records {
        std::fs::write(path, records_csv(&report.records))?;
    }
    out.write_all(summary_csv(&report).as_bytes())?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let result = run(cli.command, &mut out).and_then(|()| out.flush().map_err(Error::from));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::DataMissing { .. } => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}
