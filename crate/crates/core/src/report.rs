//! CSV formatting shared by the command-line tools.

use std::fmt::Write as _;

use crate::experiment::{ExperimentReport, RunRecord};
use crate::graph_io::GraphStats;
use crate::line_sim::SimEstimate;

/// Formats `x` with `digits` significant digits in fixed notation.
pub fn format_sig(x: f64, digits: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let magnitude = x.abs().log10().floor() as i64;
    let decimals = (digits as i64 - 1 - magnitude).max(0) as usize;
    format!("{x:.decimals$}")
}

fn sig(x: f64) -> String {
    format_sig(x, 6)
}

pub fn stats_csv(rows: &[(&str, GraphStats)]) -> String {
    let mut out = String::from(GraphStats::CSV_HEADER);
    out.push('\n');
    for (name, s) in rows {
        writeln!(
            out,
            "{name},{},{},{},{},{},{},{},{:.4e}",
            s.n,
            s.m,
            sig(s.avg_degree),
            sig(s.avg_excess_degree),
            sig(s.avg_clustering_coefficient),
            sig(s.avg_path_length),
            s.diameter,
            s.density
        )
        .unwrap();
    }
    out
}

pub const LINE_SIM_HEADER: &str =
    "r1,omega,M,num_groups,seed,estimate,std_error,closed_form,z_score";

/// One line-simulation row: estimate beside the closed form.
pub fn line_sim_row(
    r1: f64,
    omega: f64,
    m: usize,
    seed: u64,
    est: &SimEstimate,
    closed_form: f64,
) -> String {
    let z = if est.std_error > 0.0 {
        (est.mean_cost - closed_form) / est.std_error
    } else {
        0.0
    };
    format!(
        "{r1},{omega},{m},{},{seed},{},{},{},{}",
        est.num_groups,
        sig(est.mean_cost),
        sig(est.std_error),
        sig(closed_form),
        format_sig(z, 4)
    )
}

pub const SUMMARY_HEADER: &str = "dataset,n,strategy,M,num_seeds,phi,depth,runs,seed,\
mean_prevalence,prevalence_std_error,mean_cost,cost_std_error,theory_cost";

pub fn summary_csv(report: &ExperimentReport) -> String {
    let c = &report.config;
    let mut out = String::from(SUMMARY_HEADER);
    out.push('\n');
    for s in &report.summaries {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            report.dataset,
            report.n,
            c.strategy.name(),
            c.pool_size,
            s.num_seeds,
            c.phi,
            c.depth,
            c.runs,
            c.seed,
            sig(s.mean_prevalence),
            sig(s.prevalence_std_error),
            sig(s.mean_cost),
            sig(s.cost_std_error),
            sig(s.theory_cost)
        )
        .unwrap();
    }
    out
}

pub const RECORDS_HEADER: &str = "num_seeds,run,prevalence,total_tests";

pub fn records_csv(records: &[RunRecord]) -> String {
    let mut out = String::from(RECORDS_HEADER);
    out.push('\n');
    for r in records {
        writeln!(
            out,
            "{},{},{},{}",
            r.num_seeds,
            r.run,
            sig(r.prevalence),
            r.total_tests
        )
        .unwrap();
    }
    out
}
