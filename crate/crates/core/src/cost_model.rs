//! Closed-form expected relative cost of Dorfman two-stage testing.
//!
//! Samples arrive in groups. Each group has a hidden type `k` drawn with
//! probability `pi[k]`, and every sample of a type-`k` group is negative
//! with probability `r0[k]`. Group sizes are geometric with continuation
//! probability `omega`, which turns the per-sample type sequence into a
//! Markov chain with transition matrix
//!
//! ```text
//! P[i][j] = omega * [i == j] + (1 - omega) * pi[j]
//! ```
//!
//! and the expected relative cost of pooling `M` consecutive samples is
//!
//! ```text
//! (M + 1) / M - pi R (P R)^(M - 1) 1,      R = diag(r0)
//! ```
//!
//! `M = 1` is allowed and evaluates to `2 - r0`, which is worse than
//! individual testing; keeping it makes cost curves total over `M`.

use crate::error::{invalid, Result};

/// Tolerance on `sum(pi) == 1`.
pub const PROBABILITY_SUM_TOLERANCE: f64 = 1e-12;

/// Default upper bound of the exhaustive group-size search.
pub const DEFAULT_M_MAX: usize = 64;

/// Dorfman's classic group sizes for prevalence 1%, 2%, .., 10%.
pub const DORFMAN_GROUP_SIZES: [usize; 10] = [11, 8, 6, 6, 5, 5, 5, 4, 4, 4];

/// Lowest expected relative cost of (d1,d2)-regular pooling matrices for
/// prevalence 1%, .., 10%. Reference values only; that method is not
/// implemented here.
pub const D1D2_REGULAR_LOWEST_COST: [f64; 10] = [
    0.1218, 0.1881, 0.2545, 0.3147, 0.3678, 0.4166, 0.4627, 0.5035, 0.5416, 0.5760,
];

/// Markov-modulated sample stream.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelParams {
    pi: Vec<f64>,
    r0: Vec<f64>,
    omega: f64,
}

fn check_probability(name: &'static str, value: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&value) {
        return Err(invalid(name, format!("{value} is not in [0, 1]")));
    }
    Ok(())
}

fn check_group_size(m: usize) -> Result<()> {
    if m == 0 {
        return Err(invalid("M", "group size must be at least 1"));
    }
    Ok(())
}

impl ModelParams {
    pub fn new(pi: Vec<f64>, r0: Vec<f64>, omega: f64) -> Result<Self> {
        if pi.is_empty() {
            return Err(invalid("pi", "at least one group type is required"));
        }
        if pi.len() != r0.len() {
            return Err(invalid(
                "r0",
                format!("has {} entries but pi has {}", r0.len(), pi.len()),
            ));
        }
        if let Some(p) = pi.iter().find(|p| p.is_nan() || **p < 0.0) {
            return Err(invalid("pi", format!("negative or NaN entry {p}")));
        }
        let total: f64 = pi.iter().sum();
        if (total - 1.0).abs() > PROBABILITY_SUM_TOLERANCE {
            return Err(invalid("pi", format!("entries sum to {total}, not 1")));
        }
        for &r in &r0 {
            check_probability("r0", r)?;
        }
        check_probability("omega", omega)?;
        Ok(Self { pi, r0, omega })
    }

    /// Two pure types: type 1 always positive (probability `r1`), type 2
    /// always negative.
    pub fn two_type(r1: f64, omega: f64) -> Result<Self> {
        check_probability("r1", r1)?;
        Self::new(vec![r1, 1.0 - r1], vec![0.0, 1.0], omega)
    }

    pub fn num_types(&self) -> usize {
        self.pi.len()
    }

    pub fn pi(&self) -> &[f64] {
        &self.pi
    }

    pub fn r0(&self) -> &[f64] {
        &self.r0
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn with_omega(&self, omega: f64) -> Result<Self> {
        check_probability("omega", omega)?;
        Ok(Self {
            omega,
            ..self.clone()
        })
    }

    /// Row-major hidden-type transition matrix.
    pub fn transition_matrix(&self) -> Vec<Vec<f64>> {
        let k = self.num_types();
        (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| {
                        let stay = if i == j { self.omega } else { 0.0 };
                        stay + (1.0 - self.omega) * self.pi[j]
                    })
                    .collect()
            })
            .collect()
    }
}

/// Probability that a randomly selected sample is negative / positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prevalence {
    pub r0: f64,
    pub r1: f64,
}

pub fn prevalence(params: &ModelParams) -> Prevalence {
    let r0: f64 = params.pi.iter().zip(&params.r0).map(|(p, r)| p * r).sum();
    Prevalence { r0, r1: 1.0 - r0 }
}

/// Cost for i.i.d. Bernoulli samples: `(M + 1) / M - r0^M`.
pub fn cost_iid(r0: f64, m: usize) -> Result<f64> {
    check_probability("r0", r0)?;
    check_group_size(m)?;
    Ok(base_cost(m) - r0.powi(m as i32))
}

fn base_cost(m: usize) -> f64 {
    (m as f64 + 1.0) / m as f64
}

/// Probability that `m` consecutive samples are all negative, evaluated as
/// `pi R (P R)^(m-1) 1` with repeated matrix-vector products.
fn all_negative_probability(params: &ModelParams, m: usize) -> f64 {
    let p = params.transition_matrix();
    let r = &params.r0;
    let mut x = vec![1.0; params.num_types()];
    for _ in 1..m {
        let rx: Vec<f64> = r.iter().zip(&x).map(|(r, x)| r * x).collect();
        x = p
            .iter()
            .map(|row| row.iter().zip(&rx).map(|(a, b)| a * b).sum())
            .collect();
    }
    params
        .pi
        .iter()
        .zip(r)
        .zip(&x)
        .map(|((p, r), x)| p * r * x)
        .sum()
}

/// Exact expected relative cost for the Markov-modulated stream.
pub fn cost_markov(params: &ModelParams, m: usize) -> Result<f64> {
    check_group_size(m)?;
    Ok(base_cost(m) - all_negative_probability(params, m))
}

/// Closed form for two pure types (always-positive with probability `r1`,
/// always-negative otherwise).
pub fn cost_markov_special(r1: f64, omega: f64, m: usize) -> Result<f64> {
    check_probability("r1", r1)?;
    check_probability("omega", omega)?;
    check_group_size(m)?;
    Ok(special_form(1.0 - r1, omega, m))
}

fn special_form(r0: f64, omega: f64, m: usize) -> f64 {
    base_cost(m) - r0 * (omega + (1.0 - omega) * r0).powi(m as i32 - 1)
}

/// Lower bound on [`cost_markov`] over all streams with the same
/// prevalence and `omega`; attained by the two-pure-type stream.
pub fn lower_bound(params: &ModelParams, m: usize) -> Result<f64> {
    check_group_size(m)?;
    Ok(special_form(prevalence(params).r0, params.omega, m))
}

/// Cost as a function of group size, with its minimiser.
#[derive(Debug, Clone, PartialEq)]
pub struct CostCurve {
    entries: Vec<(usize, f64)>,
    argmin: usize,
}

impl CostCurve {
    /// Builds a curve from `(M, cost)` pairs sorted by strictly increasing
    /// `M`. Ties in cost resolve to the smaller `M`.
    pub fn from_entries(entries: Vec<(usize, f64)>) -> Result<Self> {
        if entries.is_empty() {
            return Err(invalid("entries", "cost curve is empty"));
        }
        if entries.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(invalid(
                "entries",
                "group sizes must be strictly increasing",
            ));
        }
        let mut best = entries[0];
        for &e in &entries[1..] {
            if e.1 < best.1 {
                best = e;
            }
        }
        Ok(Self {
            entries,
            argmin: best.0,
        })
    }

    pub fn entries(&self) -> &[(usize, f64)] {
        &self.entries
    }

    pub fn argmin(&self) -> usize {
        self.argmin
    }

    pub fn min_cost(&self) -> f64 {
        self.cost_at(self.argmin).expect("argmin is on the curve")
    }

    pub fn cost_at(&self, m: usize) -> Option<f64> {
        self.entries
            .binary_search_by_key(&m, |e| e.0)
            .ok()
            .map(|i| self.entries[i].1)
    }
}

/// Evaluates [`cost_markov`] for every `M` in `1..=m_max`.
pub fn optimal_group_size(params: &ModelParams, m_max: usize) -> Result<CostCurve> {
    if m_max < 2 {
        return Err(invalid("M_max", "search bound must be at least 2"));
    }
    let entries = (1..=m_max)
        .map(|m| cost_markov(params, m).map(|c| (m, c)))
        .collect::<Result<Vec<_>>>()?;
    CostCurve::from_entries(entries)
}

/// How the group size is chosen when comparing against i.i.d. samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SavingsMode {
    /// Both costs at the same group size.
    FixedSize(usize),
    /// Each cost at its own optimal group size in `1..=m_max`.
    OptimalSize { m_max: usize },
}

/// `100 * cost(omega) / cost(omega = 0)`, in percent.
pub fn savings_ratio(params: &ModelParams, mode: SavingsMode) -> Result<f64> {
    let iid = params.with_omega(0.0)?;
    let (correlated, baseline) = match mode {
        SavingsMode::FixedSize(m) => (cost_markov(params, m)?, cost_markov(&iid, m)?),
        SavingsMode::OptimalSize { m_max } => (
            optimal_group_size(params, m_max)?.min_cost(),
            optimal_group_size(&iid, m_max)?.min_cost(),
        ),
    };
    // baseline >= 1/M > 0 for every valid input
    Ok(100.0 * correlated / baseline)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn three_type(omega: f64) -> ModelParams {
        ModelParams::new(vec![0.2, 0.3, 0.5], vec![0.9, 0.95, 0.99], omega).unwrap()
    }

    #[test]
    fn prevalence_examples() {
        let p = prevalence(&ModelParams::new(vec![0.05, 0.95], vec![0.0, 1.0], 0.0).unwrap());
        assert_abs_diff_eq!(p.r0, 0.95, epsilon = 1e-15);
        assert_abs_diff_eq!(p.r1, 0.05, epsilon = 1e-15);
        let p = prevalence(&ModelParams::new(vec![1.0], vec![0.99], 0.3).unwrap());
        assert_abs_diff_eq!(p.r0, 0.99, epsilon = 1e-15);
        // 0.18 + 0.285 + 0.495
        assert_abs_diff_eq!(prevalence(&three_type(0.0)).r0, 0.96, epsilon = 1e-15);
    }

    #[test]
    fn rejects_invalid_params() {
        let err = ModelParams::new(vec![0.5, 0.6], vec![1.0, 1.0], 0.0).unwrap_err();
        assert!(err.to_string().contains("pi"), "{err}");
        let err = ModelParams::new(vec![1.0], vec![1.2], 0.0).unwrap_err();
        assert!(err.to_string().contains("r0"), "{err}");
        let err = ModelParams::new(vec![1.0], vec![1.0], -0.1).unwrap_err();
        assert!(err.to_string().contains("omega"), "{err}");
        assert!(ModelParams::new(vec![1.5, -0.5], vec![1.0, 1.0], 0.0).is_err());
        assert!(ModelParams::new(vec![], vec![], 0.0).is_err());
        assert!(ModelParams::new(vec![1.0], vec![0.5, 0.5], 0.0).is_err());
    }

    #[test]
    fn iid_cost_examples() {
        assert_abs_diff_eq!(cost_iid(0.99, 11).unwrap(), 0.1956, epsilon = 1e-4);
        assert_abs_diff_eq!(cost_iid(0.95, 5).unwrap(), 0.4262, epsilon = 1e-4);
        for m in 1..20 {
            assert_abs_diff_eq!(cost_iid(1.0, m).unwrap(), 1.0 / m as f64, epsilon = 1e-15);
        }
        assert_abs_diff_eq!(cost_iid(0.9, 1).unwrap(), 2.0 - 0.9, epsilon = 1e-15);
        assert!(cost_iid(0.9, 0).is_err());
        assert!(cost_iid(1.1, 3).is_err());
    }

    #[test]
    fn markov_cost_examples() {
        let p = ModelParams::two_type(0.01, 0.9).unwrap();
        assert_abs_diff_eq!(cost_markov(&p, 11).unwrap(), 0.1108, epsilon = 1e-4);
        // brute-force enumeration over all 27 hidden-type sequences
        assert_abs_diff_eq!(
            cost_markov(&three_type(0.5), 3).unwrap(),
            0.447_164_833_333_333_2,
            epsilon = 1e-12
        );
        assert!(cost_markov(&p, 0).is_err());
    }

    #[test]
    fn omega_zero_collapses_to_iid() {
        let p = three_type(0.0);
        for m in 1..=32 {
            let iid = cost_iid(prevalence(&p).r0, m).unwrap();
            assert_abs_diff_eq!(cost_markov(&p, m).unwrap(), iid, epsilon = 1e-12);
        }
    }

    #[test]
    fn omega_one_is_a_mixture() {
        let p = three_type(1.0);
        for m in 1..=32 {
            let mixture: f64 = p
                .pi()
                .iter()
                .zip(p.r0())
                .map(|(a, r)| a * r.powi(m as i32))
                .sum();
            let expected = (m as f64 + 1.0) / m as f64 - mixture;
            assert_abs_diff_eq!(cost_markov(&p, m).unwrap(), expected, epsilon = 1e-12);
        }
    }

    #[test]
    fn transition_matrix_is_row_stochastic() {
        for omega in [0.0, 0.3, 0.9, 1.0] {
            for row in three_type(omega).transition_matrix() {
                assert_abs_diff_eq!(row.iter().sum::<f64>(), 1.0, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn special_case_examples() {
        assert_abs_diff_eq!(
            cost_markov_special(0.05, 0.5, 5).unwrap(),
            0.3415,
            epsilon = 1e-4
        );
        assert_abs_diff_eq!(
            cost_markov_special(0.05, 0.0, 5).unwrap(),
            cost_iid(0.95, 5).unwrap(),
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            cost_markov_special(0.01, 0.9, 32).unwrap(),
            0.0715,
            epsilon = 1e-4
        );
        assert!(cost_markov_special(-0.01, 0.5, 5).is_err());
        assert!(cost_markov_special(0.01, 1.5, 5).is_err());
        assert!(cost_markov_special(0.01, 0.5, 0).is_err());
    }

    #[test]
    fn special_case_matches_matrix_form() {
        for r1 in [0.0, 0.01, 0.07, 0.5, 1.0] {
            for omega in [0.0, 0.25, 0.9, 1.0] {
                let p = ModelParams::two_type(r1, omega).unwrap();
                for m in 1..=40 {
                    let a = cost_markov_special(r1, omega, m).unwrap();
                    assert_abs_diff_eq!(cost_markov(&p, m).unwrap(), a, epsilon = 1e-12);
                    assert_abs_diff_eq!(lower_bound(&p, m).unwrap(), a, epsilon = 1e-12);
                }
            }
        }
    }

    #[test]
    fn lower_bound_below_cost() {
        let p = three_type(0.6);
        for m in 1..=32 {
            assert!(lower_bound(&p, m).unwrap() <= cost_markov(&p, m).unwrap() + 1e-12);
        }
        let p = three_type(0.0);
        let r0 = prevalence(&p).r0;
        assert_abs_diff_eq!(
            lower_bound(&p, 7).unwrap(),
            cost_iid(r0, 7).unwrap(),
            epsilon = 1e-15
        );
    }

    #[test]
    fn optimal_sizes() {
        let curve = optimal_group_size(&ModelParams::two_type(0.01, 0.9).unwrap(), 64).unwrap();
        assert_eq!(curve.argmin(), 32);
        assert_eq!(curve.entries().len(), 64);
        let curve = optimal_group_size(&ModelParams::two_type(0.10, 0.0).unwrap(), 64).unwrap();
        assert_eq!(curve.argmin(), 4);
        let curve = optimal_group_size(&ModelParams::two_type(0.05, 0.3).unwrap(), 64).unwrap();
        assert_eq!(curve.argmin(), 6);
        assert!(optimal_group_size(&three_type(0.1), 1).is_err());
    }

    #[test]
    fn curve_ties_prefer_smaller_size() {
        let curve = CostCurve::from_entries(vec![(1, 0.5), (2, 0.25), (3, 0.25)]).unwrap();
        assert_eq!(curve.argmin(), 2);
        assert!(CostCurve::from_entries(vec![(2, 0.5), (2, 0.25)]).is_err());
        // all-negative population: cost 1/M is strictly decreasing
        let curve = optimal_group_size(&ModelParams::two_type(0.0, 0.5).unwrap(), 10).unwrap();
        assert_eq!(curve.argmin(), 10);
    }

    #[test]
    fn savings_examples() {
        let p = ModelParams::two_type(0.01, 0.1).unwrap();
        assert_abs_diff_eq!(
            savings_ratio(&p, SavingsMode::FixedSize(11)).unwrap(),
            95.4,
            epsilon = 0.05
        );
        let p = ModelParams::two_type(0.01, 0.0).unwrap();
        assert_abs_diff_eq!(
            savings_ratio(&p, SavingsMode::FixedSize(11)).unwrap(),
            100.0,
            epsilon = 1e-12
        );
        let p = ModelParams::two_type(0.10, 0.9).unwrap();
        let opt = SavingsMode::OptimalSize { m_max: 64 };
        assert_abs_diff_eq!(savings_ratio(&p, opt).unwrap(), 46.6, epsilon = 0.05);
    }
}
