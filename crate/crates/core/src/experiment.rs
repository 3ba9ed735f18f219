//! Pooled testing on a social graph: cascades scored under a pooling
//! strategy, averaged over independent runs.
//!
//! Run `r` at seed count `s` draws its cascade from stream `(s, r)`, so
//! both strategies see the same infections for a given experiment seed.
//! The random strategy redraws its permutation every run; the
//! hierarchical strategy is computed once per graph.

use std::str::FromStr;

use crate::cascade::{measure_prevalence, run_cascade, CascadeConfig};
use crate::cost_model::cost_iid;
use crate::error::{invalid, Error, Result};
use crate::graph::Graph;
use crate::par;
use crate::pool_exec::{run_dorfman, PoolingStrategy};
use crate::pooling::{hierarchical_pooling, random_pooling_with};
use crate::rng::{self, tag};
use crate::sampled_graph::SampledGraph;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StrategyKind {
    Hierarchical,
    Random,
}

impl StrategyKind {
    pub fn name(self) -> &'static str {
        match self {
            StrategyKind::Hierarchical => "hier",
            StrategyKind::Random => "random",
        }
    }
}

impl FromStr for StrategyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hier" => Ok(StrategyKind::Hierarchical),
            "random" => Ok(StrategyKind::Random),
            other => Err(invalid(
                "strategy",
                format!("unknown strategy `{other}` (hier | random)"),
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GraphExperimentConfig {
    pub pool_size: usize,
    pub min_seeds: usize,
    pub max_seeds: usize,
    pub runs: usize,
    pub phi: f64,
    pub depth: usize,
    pub strategy: StrategyKind,
    pub seed: u64,
}

impl Default for GraphExperimentConfig {
    fn default() -> Self {
        Self {
            pool_size: 10,
            min_seeds: 1,
            max_seeds: 5,
            runs: 10_000,
            phi: 0.1,
            depth: 2,
            strategy: StrategyKind::Hierarchical,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunRecord {
    pub num_seeds: usize,
    pub run: usize,
    pub prevalence: f64,
    pub total_tests: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeedSummary {
    pub num_seeds: usize,
    pub mean_prevalence: f64,
    pub prevalence_std_error: f64,
    /// Total tests over all runs divided by `n * runs`.
    pub mean_cost: f64,
    pub cost_std_error: f64,
    /// i.i.d. cost at the mean prevalence.
    pub theory_cost: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentReport {
    pub dataset: String,
    pub n: usize,
    pub config: GraphExperimentConfig,
    pub records: Vec<RunRecord>,
    pub summaries: Vec<SeedSummary>,
}

fn mean_and_se(values: impl Iterator<Item = f64> + Clone) -> (f64, f64) {
    let n = values.clone().count() as f64;
    let mean = values.clone().sum::<f64>() / n;
    if n < 2.0 {
        return (mean, 0.0);
    }
    let var = values.map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Summaries recomputed from per-run records.
pub fn summarize(records: &[RunRecord], n: usize, pool_size: usize) -> Result<Vec<SeedSummary>> {
    let mut seeds: Vec<usize> = records.iter().map(|r| r.num_seeds).collect();
    seeds.dedup();
    seeds
        .into_iter()
        .map(|s| {
            let rs: Vec<&RunRecord> = records.iter().filter(|r| r.num_seeds == s).collect();
            let (mean_prevalence, prevalence_std_error) =
                mean_and_se(rs.iter().map(|r| r.prevalence));
            let total: usize = rs.iter().map(|r| r.total_tests).sum();
            let mean_cost = total as f64 / (n * rs.len()) as f64;
            let (_, cost_std_error) =
                mean_and_se(rs.iter().map(|r| r.total_tests as f64 / n as f64));
            Ok(SeedSummary {
                num_seeds: s,
                mean_prevalence,
                prevalence_std_error,
                mean_cost,
                cost_std_error,
                theory_cost: cost_iid(1.0 - mean_prevalence, pool_size)?,
            })
        })
        .collect()
}

/// Hierarchical pooling strategy of a graph.
pub fn hierarchical_strategy(graph: &Graph) -> Result<PoolingStrategy> {
    Ok(hierarchical_pooling(&SampledGraph::new(graph)?)?.0)
}

pub fn run_graph_experiment(
    graph: &Graph,
    dataset: &str,
    config: &GraphExperimentConfig,
) -> Result<ExperimentReport> {
    let fixed = match config.strategy {
        StrategyKind::Hierarchical => Some(hierarchical_strategy(graph)?),
        StrategyKind::Random => None,
    };
    run_graph_experiment_with(graph, dataset, config, fixed.as_ref())
}

/// Like [`run_graph_experiment`], reusing a precomputed hierarchical strategy.
pub fn run_graph_experiment_with(
    graph: &Graph,
    dataset: &str,
    config: &GraphExperimentConfig,
    hierarchical: Option<&PoolingStrategy>,
) -> Result<ExperimentReport> {
    let n = graph.num_nodes();
    if config.runs == 0 {
        return Err(invalid("runs", "at least one run is required"));
    }
    if config.pool_size == 0 {
        return Err(invalid("M", "group size must be at least 1"));
    }
    if config.min_seeds == 0 || config.min_seeds > config.max_seeds {
        return Err(invalid(
            "num_seeds",
            format!("bad range {}..{}", config.min_seeds, config.max_seeds),
        ));
    }
    let fixed = match (config.strategy, hierarchical) {
        (StrategyKind::Hierarchical, Some(s)) if s.len() == n => Some(s),
        (StrategyKind::Hierarchical, Some(_)) => {
            return Err(invalid(
                "strategy",
                "precomputed strategy does not match the graph",
            ))
        }
        (StrategyKind::Hierarchical, None) => {
            return Err(invalid("strategy", "hierarchical strategy not supplied"))
        }
        (StrategyKind::Random, _) => None,
    };

    let mut records = Vec::with_capacity(config.runs * (config.max_seeds - config.min_seeds + 1));
    for num_seeds in config.min_seeds..=config.max_seeds {
        let cascade = CascadeConfig {
            phi: config.phi,
            depth: config.depth,
            num_seeds,
        };
        cascade.validate(n)?;
        let runs = par::map_indexed(config.runs, |run| -> Result<RunRecord> {
            let mut rng = rng::stream(
                config.seed,
                rng::stream_id(tag::CASCADE, num_seeds as u64, run as u64),
            );
            let status = run_cascade(graph, &cascade, &mut rng)?;
            let outcome = match fixed {
                Some(sigma) => run_dorfman(&status, sigma, config.pool_size)?,
                None => {
                    let mut rng = rng::stream(
                        config.seed,
                        rng::stream_id(tag::RANDOM_POOL, num_seeds as u64, run as u64),
                    );
                    run_dorfman(&status, &random_pooling_with(n, &mut rng), config.pool_size)?
                }
            };
            Ok(RunRecord {
                num_seeds,
                run,
                prevalence: measure_prevalence(&status)?,
                total_tests: outcome.total_tests,
            })
        });
        for r in runs {
            records.push(r?);
        }
    }
    let summaries = summarize(&records, n, config.pool_size)?;
    Ok(ExperimentReport {
        dataset: dataset.to_string(),
        n,
        config: config.clone(),
        records,
        summaries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph_io::{generate_small_world, SmallWorldConfig};

    fn small_graph() -> Graph {
        let cfg = SmallWorldConfig {
            n: 200,
            k: 8,
            rewire_p: 0.2,
            ..Default::default()
        };
        generate_small_world(&cfg, 1).unwrap()
    }

    fn config(strategy: StrategyKind) -> GraphExperimentConfig {
        GraphExperimentConfig {
            runs: 200,
            max_seeds: 3,
            strategy,
            seed: 42,
            ..Default::default()
        }
    }

    #[test]
    fn aggregates_match_records() {
        let g = small_graph();
        let report = run_graph_experiment(&g, "sw", &config(StrategyKind::Random)).unwrap();
        assert_eq!(report.records.len(), 600);
        assert_eq!(report.summaries.len(), 3);
        for s in &report.summaries {
            let total: usize = report
                .records
                .iter()
                .filter(|r| r.num_seeds == s.num_seeds)
                .map(|r| r.total_tests)
                .sum();
            assert_eq!(s.mean_cost, total as f64 / (200.0 * 200.0));
        }
        assert_eq!(
            summarize(&report.records, 200, 10).unwrap(),
            report.summaries
        );
    }

    #[test]
    fn strategies_share_cascades() {
        let g = small_graph();
        let a = run_graph_experiment(&g, "sw", &config(StrategyKind::Random)).unwrap();
        let b = run_graph_experiment(&g, "sw", &config(StrategyKind::Hierarchical)).unwrap();
        let prev =
            |r: &ExperimentReport| r.records.iter().map(|x| x.prevalence).collect::<Vec<_>>();
        assert_eq!(prev(&a), prev(&b));
    }

    #[test]
    fn seeds_only_when_phi_is_zero() {
        let g = small_graph();
        let mut c = config(StrategyKind::Random);
        c.phi = 0.0;
        let report = run_graph_experiment(&g, "sw", &c).unwrap();
        for s in &report.summaries {
            assert!((s.mean_prevalence - s.num_seeds as f64 / 200.0).abs() < 1e-15);
        }
    }

    #[test]
    fn rejects_bad_config() {
        let g = small_graph();
        let mut c = config(StrategyKind::Random);
        c.runs = 0;
        assert!(run_graph_experiment(&g, "sw", &c).is_err());
        let mut c = config(StrategyKind::Random);
        c.min_seeds = 4;
        assert!(run_graph_experiment(&g, "sw", &c).is_err());
        let mut c = config(StrategyKind::Random);
        c.max_seeds = 201;
        assert!(run_graph_experiment(&g, "sw", &c).is_err());
        let c = config(StrategyKind::Hierarchical);
        assert!(run_graph_experiment_with(&g, "sw", &c, None).is_err());
        assert_eq!(
            "hier".parse::<StrategyKind>().unwrap(),
            StrategyKind::Hierarchical
        );
        assert!("dfs".parse::<StrategyKind>().is_err());
    }
}
