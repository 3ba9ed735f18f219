//! Monte-Carlo simulation of the sample line at a testing site.
//!
//! Groups arrive with i.i.d. sizes and i.i.d. hidden types; every sample
//! of a group is positive independently with probability `1 - r0[type]`.
//! The line is cut into consecutive pools of `M` aligned at the first
//! sample and each pool is scored with Dorfman accounting.
//!
//! The line is generated as a fixed number of independent segments, each
//! covering a contiguous range of pools and driven by its own random
//! stream. Segment boundaries depend only on the configuration, so serial
//! and parallel runs produce identical output. Each segment starts at a
//! group boundary; for geometric group sizes that start is already
//! stationary.

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::Geometric;

use crate::cost_model::ModelParams;
use crate::error::{invalid, Result};
use crate::par;
use crate::pool_exec::{pool_tests, StatusVector};
use crate::rng::{self, tag, StreamRng};

/// Largest group size accepted in an explicit size table.
pub const MAX_TABLE_SUPPORT: usize = 10_000;

/// Number of independent line segments per simulation.
pub const SEGMENTS: usize = 64;

/// Distribution of the number of samples an arriving group brings.
#[derive(Debug, Clone, PartialEq)]
pub enum GroupSizeDist {
    /// `P(T = k) = omega^(k-1) (1 - omega)`, `k >= 1`.
    Geometric { omega: f64 },
    /// `(size, weight)` pairs; weights are normalised.
    Table(Vec<(usize, f64)>),
}

#[derive(Debug, Clone)]
enum SizeSampler {
    Constant,
    Geometric(Geometric),
    Table(Vec<usize>, WeightedIndex<f64>),
}

impl SizeSampler {
    fn sample(&self, rng: &mut StreamRng) -> usize {
        match self {
            SizeSampler::Constant => 1,
            SizeSampler::Geometric(g) => 1 + g.sample(rng) as usize,
            SizeSampler::Table(sizes, w) => sizes[w.sample(rng)],
        }
    }
}

impl GroupSizeDist {
    fn sampler(&self) -> Result<SizeSampler> {
        match self {
            GroupSizeDist::Geometric { omega } => {
                if !(0.0..1.0).contains(omega) {
                    return Err(invalid(
                        "omega",
                        format!("geometric group sizes need omega in [0, 1), got {omega}"),
                    ));
                }
                if *omega == 0.0 {
                    return Ok(SizeSampler::Constant);
                }
                let g = Geometric::new(1.0 - omega).map_err(|e| invalid("omega", e.to_string()))?;
                Ok(SizeSampler::Geometric(g))
            }
            GroupSizeDist::Table(entries) => {
                if let Some((size, _)) = entries
                    .iter()
                    .find(|(s, _)| *s == 0 || *s > MAX_TABLE_SUPPORT)
                {
                    return Err(invalid(
                        "group_size_dist",
                        format!("size {size} outside 1..={MAX_TABLE_SUPPORT}"),
                    ));
                }
                let sizes = entries.iter().map(|e| e.0).collect();
                let weights = WeightedIndex::new(entries.iter().map(|e| e.1))
                    .map_err(|e| invalid("group_size_dist", e.to_string()))?;
                Ok(SizeSampler::Table(sizes, weights))
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct ArrivalConfig {
    pub params: ModelParams,
    pub group_sizes: GroupSizeDist,
    /// Pooling group size `M`.
    pub pool_size: usize,
    /// Number of pools of `M` samples to simulate.
    pub num_groups: usize,
    pub seed: u64,
}

impl ArrivalConfig {
    /// Geometric group sizes with the continuation parameter of `params`.
    pub fn markov(params: ModelParams, pool_size: usize, num_groups: usize, seed: u64) -> Self {
        let omega = params.omega();
        Self {
            params,
            group_sizes: GroupSizeDist::Geometric { omega },
            pool_size,
            num_groups,
            seed,
        }
    }

    pub fn len(&self) -> usize {
        self.pool_size * self.num_groups
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn validate(&self) -> Result<SizeSampler> {
        if self.pool_size == 0 {
            return Err(invalid("M", "group size must be at least 1"));
        }
        if self.num_groups == 0 {
            return Err(invalid("num_groups", "at least one group is required"));
        }
        self.group_sizes.sampler()
    }

    /// Pool ranges covered by each segment.
    fn segments(&self) -> Vec<std::ops::Range<usize>> {
        let count = SEGMENTS.min(self.num_groups);
        let per = self.num_groups.div_ceil(count);
        (0..count)
            .map(|s| s * per..((s + 1) * per).min(self.num_groups))
            .filter(|r| !r.is_empty())
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimEstimate {
    pub mean_cost: f64,
    pub std_error: f64,
    pub num_groups: usize,
}

fn generate_segment(
    config: &ArrivalConfig,
    sizes: &SizeSampler,
    index: usize,
    len: usize,
) -> Vec<bool> {
    let mut rng = rng::stream(config.seed, rng::stream_id(tag::LINE, 0, index as u64));
    let types = WeightedIndex::new(config.params.pi()).expect("validated probability vector");
    let r0 = config.params.r0();
    let mut bits = Vec::with_capacity(len);
    while bits.len() < len {
        let size = sizes.sample(&mut rng).min(len - bits.len());
        let p_positive = 1.0 - r0[types.sample(&mut rng)];
        bits.extend((0..size).map(|_| rng.random_bool(p_positive)));
    }
    bits
}

fn segment_lines(config: &ArrivalConfig) -> Result<Vec<Vec<bool>>> {
    let sizes = config.validate()?;
    let segments = config.segments();
    let m = config.pool_size;
    Ok(par::map_indexed(segments.len(), |s| {
        generate_segment(config, &sizes, s, segments[s].len() * m)
    }))
}

/// Generates `num_groups * M` line samples.
pub fn generate_line(config: &ArrivalConfig) -> Result<StatusVector> {
    Ok(segment_lines(config)?.into_iter().flatten().collect())
}

fn pool_sums(bits: &[bool], m: usize) -> (f64, f64) {
    bits.chunks(m).fold((0.0, 0.0), |(s, s2), pool| {
        let t = pool_tests(pool.len(), pool.iter().any(|b| *b)) as f64;
        (s + t, s2 + t * t)
    })
}

/// Estimated cost of pooling consecutive samples.
///
/// The standard error treats segments as independent clusters of pools
/// (ratio estimator), which stays valid when neighbouring pools share an
/// arriving group.
pub fn estimate_cost(config: &ArrivalConfig) -> Result<SimEstimate> {
    let m = config.pool_size;
    let lines = segment_lines(config)?;
    let totals: Vec<(f64, f64)> = lines
        .iter()
        .map(|l| (pool_sums(l, m).0, (l.len() / m) as f64))
        .collect();
    let pools: f64 = totals.iter().map(|t| t.1).sum();
    let tests: f64 = totals.iter().map(|t| t.0).sum();
    let mean = tests / pools;
    let c = totals.len() as f64;
    let std_error = if totals.len() < 2 {
        0.0
    } else {
        let avg_size = pools / c;
        let ss: f64 = totals.iter().map(|(t, n)| (t - mean * n).powi(2)).sum();
        (ss / (c * (c - 1.0))).sqrt() / avg_size
    };
    Ok(SimEstimate {
        mean_cost: mean / m as f64,
        std_error: std_error / m as f64,
        num_groups: config.num_groups,
    })
}

/// Estimated cost after a uniform random permutation of the whole line.
pub fn estimate_random_pooling_cost(config: &ArrivalConfig) -> Result<SimEstimate> {
    let m = config.pool_size;
    let mut bits = generate_line(config)?.into_bits();
    let mut rng = rng::stream(config.seed, rng::stream_id(tag::SHUFFLE, 0, 0));
    bits.shuffle(&mut rng);
    let (s, s2) = pool_sums(&bits, m);
    let n = config.num_groups as f64;
    let mean = s / n;
    let var = if config.num_groups > 1 {
        ((s2 - n * mean * mean) / (n - 1.0)).max(0.0)
    } else {
        0.0
    };
    Ok(SimEstimate {
        mean_cost: mean / m as f64,
        std_error: (var / n).sqrt() / m as f64,
        num_groups: config.num_groups,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cost_model::{cost_iid, cost_markov};

    fn config(params: ModelParams, m: usize, groups: usize, seed: u64) -> ArrivalConfig {
        ArrivalConfig::markov(params, m, groups, seed)
    }

    #[test]
    fn iid_line_has_right_mean() {
        let c = config(ModelParams::two_type(0.05, 0.0).unwrap(), 1, 200_000, 1);
        let line = generate_line(&c).unwrap();
        assert_eq!(line.len(), 200_000);
        let p = line.count_positive() as f64 / line.len() as f64;
        let sigma = (0.05f64 * 0.95 / 200_000.0).sqrt();
        assert!((p - 0.05).abs() < 4.0 * sigma, "{p}");
    }

    #[test]
    fn all_negative_type_gives_zero_line() {
        let c = config(
            ModelParams::new(vec![1.0], vec![1.0], 0.5).unwrap(),
            4,
            1000,
            2,
        );
        assert_eq!(generate_line(&c).unwrap().count_positive(), 0);
        let est = estimate_cost(&c).unwrap();
        assert_eq!(est.mean_cost, 0.25);
        assert_eq!(est.std_error, 0.0);
    }

    #[test]
    fn correlated_line_keeps_prevalence() {
        let c = config(ModelParams::two_type(0.05, 0.5).unwrap(), 1, 1_000_000, 3);
        let line = generate_line(&c).unwrap();
        let p = line.count_positive() as f64 / line.len() as f64;
        // runs of identical types double the variance of the sample mean at omega = 0.5
        let sigma = (0.05f64 * 0.95 * 3.0 / 1e6).sqrt();
        assert!((p - 0.05).abs() < 3.0 * sigma, "{p}");
    }

    #[test]
    fn deterministic_under_seed() {
        let c = config(ModelParams::two_type(0.1, 0.7).unwrap(), 5, 5000, 11);
        assert_eq!(generate_line(&c).unwrap(), generate_line(&c).unwrap());
        assert_eq!(estimate_cost(&c).unwrap(), estimate_cost(&c).unwrap());
        let other = config(ModelParams::two_type(0.1, 0.7).unwrap(), 5, 5000, 12);
        assert_ne!(generate_line(&c).unwrap(), generate_line(&other).unwrap());
    }

    #[test]
    fn estimate_matches_three_type_closed_form() {
        let params = ModelParams::new(vec![0.2, 0.3, 0.5], vec![0.9, 0.95, 0.99], 0.5).unwrap();
        let exact = cost_markov(&params, 3).unwrap();
        let est = estimate_cost(&config(params, 3, 200_000, 5)).unwrap();
        assert!(
            (est.mean_cost - exact).abs() <= 3.0 * est.std_error,
            "{est:?} vs {exact}"
        );
    }

    #[test]
    fn shuffling_recovers_iid_cost() {
        let params = ModelParams::two_type(0.05, 0.8).unwrap();
        let est = estimate_random_pooling_cost(&config(params, 5, 200_000, 8)).unwrap();
        let iid = cost_iid(0.95, 5).unwrap();
        assert!(
            (est.mean_cost - iid).abs() <= 3.0 * est.std_error,
            "{est:?} vs {iid}"
        );
    }

    #[test]
    fn table_distribution() {
        let params = ModelParams::two_type(0.1, 0.0).unwrap();
        let mut c = config(params, 4, 1000, 9);
        c.group_sizes = GroupSizeDist::Table(vec![(2, 1.0), (6, 3.0)]);
        assert_eq!(generate_line(&c).unwrap().len(), 4000);
        c.group_sizes = GroupSizeDist::Table(vec![(2, 0.0)]);
        assert!(generate_line(&c).is_err());
        c.group_sizes = GroupSizeDist::Table(vec![(0, 1.0)]);
        assert!(generate_line(&c).is_err());
        c.group_sizes = GroupSizeDist::Table(vec![(MAX_TABLE_SUPPORT + 1, 1.0)]);
        assert!(generate_line(&c).is_err());
    }

    #[test]
    fn rejects_bad_config() {
        let params = ModelParams::two_type(0.1, 0.5).unwrap();
        assert!(estimate_cost(&config(params.clone(), 0, 10, 0)).is_err());
        assert!(estimate_cost(&config(params, 3, 0, 0)).is_err());
        let c = config(ModelParams::two_type(0.1, 1.0).unwrap(), 3, 10, 0);
        assert!(estimate_cost(&c).is_err());
    }

    #[test]
    fn small_runs_use_one_pool_per_segment() {
        let c = config(ModelParams::two_type(0.3, 0.5).unwrap(), 3, 10, 4);
        assert_eq!(c.segments().len(), 10);
        let est = estimate_cost(&c).unwrap();
        assert!(est.mean_cost >= 1.0 / 3.0 && est.mean_cost <= 4.0 / 3.0);
    }
}
