//! Sampled graphs: a graph together with a symmetric bivariate
//! distribution over ordered node pairs, used as a similarity measure.
//!
//! The distribution weights paths of length one and two:
//! `p(u, w) = c * (A + A^2 / 2)(u, w)`, normalised to sum to one. The
//! diagonal of `A^2 / 2` (half the degree) is kept, so `p(u, u) > 0` for
//! every non-isolated node.
//!
//! Node and set covariances follow `q(u, w) = p(u, w) - p(u) p(w)` and
//! `q(S1, S2) = sum over u in S1, w in S2 of q(u, w)`. A set with
//! `q(S, S) >= 0` is a community.

use crate::error::{invalid, Error, Result};
use crate::graph::Graph;

/// Largest graph accepted for the dense representation.
pub const MAX_DENSE_NODES: usize = 5000;

#[derive(Debug, Clone)]
pub struct SampledGraph {
    graph: Graph,
    /// Row-major `n x n` joint distribution.
    joint: Vec<f64>,
    marginal: Vec<f64>,
}

/// Sum with pairwise (cascade) reduction.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    const LEAF: usize = 128;
    if values.len() <= LEAF {
        return values.iter().sum();
    }
    let (a, b) = values.split_at(values.len() / 2);
    pairwise_sum(a) + pairwise_sum(b)
}

impl SampledGraph {
    pub fn new(graph: &Graph) -> Result<Self> {
        let n = graph.num_nodes();
        if n > MAX_DENSE_NODES {
            return Err(Error::Capacity {
                n,
                limit: MAX_DENSE_NODES,
            });
        }
        if n < 2 {
            return Err(invalid("graph", "a sampled graph needs at least two nodes"));
        }
        if graph.num_edges() == 0 {
            return Err(Error::EmptyGraph(
                "graph has no edges; the sampling distribution is undefined".into(),
            ));
        }

        let mut joint = vec![0.0; n * n];
        for (u, w) in graph.edges() {
            joint[u * n + w] += 1.0;
            joint[w * n + u] += 1.0;
        }
        // A^2 / 2: every middle node v adds 1/2 to each ordered pair of its neighbours
        for v in 0..n {
            let ns = graph.neighbors(v);
            for &a in ns {
                let row = &mut joint[a * n..(a + 1) * n];
                for &b in ns {
                    row[b] += 0.5;
                }
            }
        }
        let c = 1.0 / pairwise_sum(&joint);
        joint.iter_mut().for_each(|x| *x *= c);
        let marginal = joint.chunks(n).map(pairwise_sum).collect();
        Ok(Self {
            graph: graph.clone(),
            joint,
            marginal,
        })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn num_nodes(&self) -> usize {
        self.marginal.len()
    }

    fn check(&self, v: usize) -> Result<()> {
        if v >= self.num_nodes() {
            return Err(Error::NodeOutOfRange {
                node: v,
                n: self.num_nodes(),
            });
        }
        Ok(())
    }

    /// `p(u, w)`; panics on out-of-range nodes.
    pub fn joint(&self, u: usize, w: usize) -> f64 {
        self.joint[u * self.num_nodes() + w]
    }

    /// `p(u)`; the distribution is symmetric so both marginals agree.
    pub fn marginal(&self, u: usize) -> f64 {
        self.marginal[u]
    }

    pub fn marginals(&self) -> &[f64] {
        &self.marginal
    }

    pub(crate) fn covariance_unchecked(&self, u: usize, w: usize) -> f64 {
        self.joint(u, w) - self.marginal[u] * self.marginal[w]
    }

    pub fn covariance(&self, u: usize, w: usize) -> Result<f64> {
        self.check(u)?;
        self.check(w)?;
        Ok(self.covariance_unchecked(u, w))
    }

    pub fn set_covariance(&self, s1: &[usize], s2: &[usize]) -> Result<f64> {
        for &v in s1.iter().chain(s2) {
            self.check(v)?;
        }
        Ok(s1
            .iter()
            .map(|&u| {
                s2.iter()
                    .map(|&w| self.covariance_unchecked(u, w))
                    .sum::<f64>()
            })
            .sum())
    }

    pub fn is_community(&self, set: &[usize]) -> Result<bool> {
        if set.is_empty() {
            return Err(invalid("S", "community test needs a nonempty set"));
        }
        Ok(self.set_covariance(set, set)? >= 0.0)
    }
}
