//! Independent-cascade infections truncated at a generation depth.
//!
//! Seeds are infected at depth 0. Generation by generation, every node
//! infected at depth `d < D` makes one trial per not-yet-infected
//! neighbour, succeeding with probability `phi`; successes join depth
//! `d + 1`. The first success infects a node, later trials on it are not
//! made. The infected set is therefore every node within live-edge
//! distance `D` of the seeds.

use rand::seq::index;
use rand::Rng;

use crate::error::{invalid, Result};
use crate::graph::Graph;
use crate::pool_exec::StatusVector;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CascadeConfig {
    /// Per-edge propagation probability.
    pub phi: f64,
    /// Maximum generation depth.
    pub depth: usize,
    pub num_seeds: usize,
}

impl Default for CascadeConfig {
    fn default() -> Self {
        Self {
            phi: 0.1,
            depth: 2,
            num_seeds: 1,
        }
    }
}

impl CascadeConfig {
    pub fn validate(&self, n: usize) -> Result<()> {
        if !(0.0..=1.0).contains(&self.phi) {
            return Err(invalid("phi", format!("{} is not in [0, 1]", self.phi)));
        }
        if self.num_seeds == 0 {
            return Err(invalid("num_seeds", "at least one seed is required"));
        }
        if self.num_seeds > n {
            return Err(invalid(
                "num_seeds",
                format!("{} seeds requested on a graph of {n} nodes", self.num_seeds),
            ));
        }
        Ok(())
    }
}

/// Runs a cascade from `seeds`, deciding each trial `u -> v` with `trial`.
pub fn cascade_from_seeds<F>(
    graph: &Graph,
    seeds: &[usize],
    depth: usize,
    mut trial: F,
) -> StatusVector
where
    F: FnMut(usize, usize) -> bool,
{
    let mut status = StatusVector::negative(graph.num_nodes());
    let mut frontier = Vec::with_capacity(seeds.len());
    for &s in seeds {
        if !status.get(s) {
            status.set(s, true);
            frontier.push(s);
        }
    }
    for _ in 0..depth {
        let mut next = Vec::new();
        for &u in &frontier {
            for &v in graph.neighbors(u) {
                if !status.get(v) && trial(u, v) {
                    status.set(v, true);
                    next.push(v);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    status
}

/// Draws `num_seeds` distinct seeds uniformly and runs the cascade.
pub fn run_cascade<R: Rng + ?Sized>(
    graph: &Graph,
    config: &CascadeConfig,
    rng: &mut R,
) -> Result<StatusVector> {
    config.validate(graph.num_nodes())?;
    let seeds = index::sample(rng, graph.num_nodes(), config.num_seeds).into_vec();
    let phi = config.phi;
    Ok(cascade_from_seeds(graph, &seeds, config.depth, |_, _| {
        rng.random_bool(phi)
    }))
}

/// Fraction of positive entries.
pub fn measure_prevalence(status: &StatusVector) -> Result<f64> {
    if status.is_empty() {
        return Err(invalid("status", "prevalence of an empty population"));
    }
    Ok(status.count_positive() as f64 / status.len() as f64)
}
