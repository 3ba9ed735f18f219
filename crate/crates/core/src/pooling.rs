//! Pooling strategies: hierarchical agglomerative merging on a sampled
//! graph, and uniformly random pooling.
//!
//! The hierarchical strategy starts from singleton sets and repeatedly
//! merges the pair of sets with the largest covariance, appending the
//! second set to the first so that earlier orderings are preserved. It
//! runs until one set remains, even through negative-covariance merges;
//! the order of that set is the pooling permutation.
//!
//! Ties on the largest covariance go to the lexicographically smallest
//! pair of set ids `(i, j)`, `i < j`. The merged set keeps id `i`.

use std::io::Write;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{invalid, Result};
use crate::pool_exec::PoolingStrategy;
use crate::rng::{self, tag};
use crate::sampled_graph::SampledGraph;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Merge {
    /// 1-based merge number.
    pub step: usize,
    /// Surviving set id.
    pub left: usize,
    /// Set id appended to `left` and retired.
    pub right: usize,
    pub covariance: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Dendrogram {
    pub merges: Vec<Merge>,
}

impl Dendrogram {
    pub const CSV_HEADER: &'static str = "step,left_id,right_id,covariance";

    /// Merge log as CSV. Set ids are written 1-based, matching node ids.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "{}", Self::CSV_HEADER)?;
        for m in &self.merges {
            writeln!(
                out,
                "{},{},{},{:e}",
                m.step,
                m.left + 1,
                m.right + 1,
                m.covariance
            )?;
        }
        Ok(())
    }
}

const NO_PARTNER: usize = usize::MAX;

/// Live sets and their pairwise covariances during agglomeration.
///
/// Covariances are held exactly as integers scaled by `T^2`, where
/// `T = sum(2A + A^2)`: with `w = 2A + A^2` and row sums `s`, one has
/// `T^2 q(u, v) = w(u, v) T - s(u) s(v)`. Updates are then exact and ties
/// are genuine ties.
#[derive(Debug, Clone)]
pub struct MergeState {
    n: usize,
    /// `n x n` scaled covariances indexed by set id; rows of retired ids are stale.
    cov: Vec<i128>,
    scale: f64,
    sets: Vec<Vec<usize>>,
    /// Live set ids, ascending.
    live: Vec<usize>,
    /// For live `i`: best partner `j > i` and its scaled covariance.
    best: Vec<(usize, i128)>,
    steps: usize,
}

impl MergeState {
    pub fn new(sg: &SampledGraph) -> Result<Self> {
        let graph = sg.graph();
        let n = graph.num_nodes();
        if n < 2 {
            return Err(invalid(
                "graph",
                "hierarchical pooling needs at least two nodes",
            ));
        }
        let mut weight = vec![0i128; n * n];
        for (u, w) in graph.edges() {
            weight[u * n + w] += 2;
            weight[w * n + u] += 2;
        }
        for v in 0..n {
            let ns = graph.neighbors(v);
            for &a in ns {
                for &b in ns {
                    weight[a * n + b] += 1;
                }
            }
        }
        let row: Vec<i128> = weight.chunks(n).map(|r| r.iter().sum()).collect();
        let total: i128 = row.iter().sum();
        let mut cov = weight;
        for u in 0..n {
            for w in 0..n {
                cov[u * n + w] = cov[u * n + w] * total - row[u] * row[w];
            }
        }
        let mut state = Self {
            n,
            cov,
            scale: (total as f64).powi(2),
            sets: (0..n).map(|v| vec![v]).collect(),
            live: (0..n).collect(),
            best: vec![(NO_PARTNER, 0); n],
            steps: 0,
        };
        for i in 0..n {
            state.refresh_best(i);
        }
        Ok(state)
    }

    #[inline]
    fn at(&self, i: usize, j: usize) -> i128 {
        self.cov[i * self.n + j]
    }

    fn refresh_best(&mut self, i: usize) {
        let start = self.live.partition_point(|&x| x <= i);
        let mut best = (NO_PARTNER, 0);
        for &j in &self.live[start..] {
            let c = self.at(i, j);
            if best.0 == NO_PARTNER || c > best.1 {
                best = (j, c);
            }
        }
        self.best[i] = best;
    }

    /// The pair with the largest covariance under the tie-break rule.
    fn select(&self) -> Option<(usize, usize, i128)> {
        let mut pick: Option<(usize, usize, i128)> = None;
        for &i in &self.live {
            let (j, c) = self.best[i];
            if j == NO_PARTNER {
                continue;
            }
            if pick.is_none_or(|p| c > p.2) {
                pick = Some((i, j, c));
            }
        }
        pick
    }

    /// Performs one merge; `None` once a single set remains.
    pub fn merge_next(&mut self) -> Option<Merge> {
        let (i, j, c_ij) = self.select()?;
        let n = self.n;
        let c_ii = self.at(i, i);
        let c_jj = self.at(j, j);
        self.cov[i * n + i] = c_ii + 2 * c_ij + c_jj;

        let tail = std::mem::take(&mut self.sets[j]);
        self.sets[i].extend(tail);
        let pos = self.live.binary_search(&j).expect("j is live");
        self.live.remove(pos);
        self.best[j] = (NO_PARTNER, 0);

        for idx in 0..self.live.len() {
            let l = self.live[idx];
            if l == i {
                continue;
            }
            let v = self.at(i, l) + self.at(j, l);
            self.cov[i * n + l] = v;
            self.cov[l * n + i] = v;
        }

        self.refresh_best(i);
        for idx in 0..self.live.len() {
            let l = self.live[idx];
            if l >= j {
                break;
            }
            let (partner, value) = self.best[l];
            if l < i {
                if partner == i || partner == j {
                    self.refresh_best(l);
                } else {
                    let v = self.at(l, i);
                    if v > value || (v == value && i < partner) {
                        self.best[l] = (i, v);
                    }
                }
            } else if l > i && partner == j {
                self.refresh_best(l);
            }
        }

        self.steps += 1;
        Some(Merge {
            step: self.steps,
            left: i,
            right: j,
            covariance: c_ij as f64 / self.scale,
        })
    }

    pub fn num_sets(&self) -> usize {
        self.live.len()
    }

    /// Live `(id, members)` pairs in id order.
    pub fn live_sets(&self) -> impl Iterator<Item = (usize, &[usize])> + '_ {
        self.live.iter().map(|&i| (i, self.sets[i].as_slice()))
    }

    /// Maintained covariance between live sets `i` and `j`.
    pub fn covariance(&self, i: usize, j: usize) -> f64 {
        self.at(i, j) as f64 / self.scale
    }

    /// Maintained covariance times `T^2`, exact.
    pub fn scaled_covariance(&self, i: usize, j: usize) -> i128 {
        self.at(i, j)
    }

    fn into_strategy(mut self) -> PoolingStrategy {
        let survivor = self.live[0];
        PoolingStrategy::new(std::mem::take(&mut self.sets[survivor]))
            .expect("merged sets partition the nodes")
    }
}

/// Runs the agglomeration to a single set.
pub fn hierarchical_pooling(sg: &SampledGraph) -> Result<(PoolingStrategy, Dendrogram)> {
    let mut state = MergeState::new(sg)?;
    let mut dendrogram = Dendrogram::default();
    while let Some(m) = state.merge_next() {
        dendrogram.merges.push(m);
    }
    Ok((state.into_strategy(), dendrogram))
}

/// Uniform random permutation of `0..n` drawn from `rng`.
pub fn random_pooling_with<R: Rng + ?Sized>(n: usize, rng: &mut R) -> PoolingStrategy {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    PoolingStrategy::new(order).expect("shuffle of identity")
}

pub fn random_pooling(n: usize, seed: u64) -> PoolingStrategy {
    let mut rng = rng::stream(seed, rng::stream_id(tag::RANDOM_POOL, 0, 0));
    random_pooling_with(n, &mut rng)
}
