//! Dorfman two-stage test accounting for a finite population.
//!
//! Samples are pooled in the order given by a [`PoolingStrategy`]:
//! positions `0..M` form the first pool, `M..2M` the second, and so on.
//! A negative pool costs one test. A positive pool costs one test plus one
//! retest per member, including pools of size one. When `M` does not
//! divide `n` the final, smaller pool is tested the same way.

use crate::error::{invalid, Error, Result};

/// Per-sample infection indicators.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct StatusVector(Vec<bool>);

impl StatusVector {
    pub fn new(bits: Vec<bool>) -> Self {
        Self(bits)
    }

    pub fn negative(n: usize) -> Self {
        Self(vec![false; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn get(&self, i: usize) -> bool {
        self.0[i]
    }

    pub fn set(&mut self, i: usize, positive: bool) {
        self.0[i] = positive;
    }

    pub fn count_positive(&self) -> usize {
        self.0.iter().filter(|b| **b).count()
    }

    pub fn into_bits(self) -> Vec<bool> {
        self.0
    }
}

impl FromIterator<bool> for StatusVector {
    fn from_iter<I: IntoIterator<Item = bool>>(iter: I) -> Self {
        Self(iter.into_iter().collect())
    }
}

/// A permutation of `0..n`; `order()[i]` is the sample placed at position `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PoolingStrategy(Vec<usize>);

impl PoolingStrategy {
    pub fn new(order: Vec<usize>) -> Result<Self> {
        let n = order.len();
        let mut seen = vec![false; n];
        for &v in &order {
            if v >= n {
                return Err(Error::NodeOutOfRange { node: v, n });
            }
            if std::mem::replace(&mut seen[v], true) {
                return Err(invalid("sigma", format!("index {v} appears twice")));
            }
        }
        Ok(Self(order))
    }

    pub fn identity(n: usize) -> Self {
        Self((0..n).collect())
    }

    pub fn order(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_order(self) -> Vec<usize> {
        self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TestOutcome {
    pub total_tests: usize,
    pub groups_positive: usize,
    pub relative_cost: f64,
}

/// Tests spent on one pool.
#[inline]
pub fn pool_tests(size: usize, any_positive: bool) -> usize {
    if any_positive {
        1 + size
    } else {
        1
    }
}

/// Test count of each pool, in pool order.
pub fn tests_per_pool<'a>(
    status: &'a StatusVector,
    sigma: &'a PoolingStrategy,
    m: usize,
) -> impl Iterator<Item = usize> + 'a {
    sigma
        .0
        .chunks(m.max(1))
        .map(move |pool| pool_tests(pool.len(), pool.iter().any(|&i| status.0[i])))
}

pub fn run_dorfman(
    status: &StatusVector,
    sigma: &PoolingStrategy,
    m: usize,
) -> Result<TestOutcome> {
    if m == 0 {
        return Err(invalid("M", "group size must be at least 1"));
    }
    if status.len() != sigma.len() {
        return Err(Error::LengthMismatch {
            status: status.len(),
            strategy: sigma.len(),
        });
    }
    if status.is_empty() {
        return Err(invalid("status", "empty population"));
    }
    let mut total_tests = 0;
    let mut groups_positive = 0;
    for tests in tests_per_pool(status, sigma, m) {
        total_tests += tests;
        groups_positive += usize::from(tests > 1);
    }
    Ok(TestOutcome {
        total_tests,
        groups_positive,
        relative_cost: total_tests as f64 / status.len() as f64,
    })
}
