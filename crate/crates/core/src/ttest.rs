//! Two-sample Student t test with pooled variance, two-sided.

use serde::{Deserialize, Serialize};

use crate::distributions::t_two_sided_p;
use crate::error::{domain, Error, Result};

/// Observations for one group: at least two finite values.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    values: Vec<f64>,
}

impl Sample {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.len() < 2 {
            return Err(domain(
                "n",
                values.len() as f64,
                "a sample needs at least two observations",
            ));
        }
        if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(domain("value", *bad, "observations must be finite"));
        }
        Ok(Self { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn mean(&self) -> f64 {
        mean(&self.values)
    }
}

impl TryFrom<Vec<f64>> for Sample {
    type Error = Error;

    fn try_from(values: Vec<f64>) -> Result<Self> {
        Sample::new(values)
    }
}

impl TryFrom<&[f64]> for Sample {
    type Error = Error;

    fn try_from(values: &[f64]) -> Result<Self> {
        Sample::new(values.to_vec())
    }
}

/// Outcome of a two-sample t test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TestResult {
    pub t_stat: f64,
    pub df: f64,
    pub p_two_sided: f64,
    /// mean(group2) - mean(group1)
    pub observed_diff: f64,
    pub se_diff: f64,
}

impl TestResult {
    pub fn is_significant(&self, alpha: f64) -> bool {
        significant(self, alpha)
    }
}

/// Pooled-variance t test of `group2` against `group1`.
pub fn two_sample_t(group1: &Sample, group2: &Sample) -> Result<TestResult> {
    pooled_t(group1.values(), group2.values())
}

/// Significance at level `alpha`; the threshold is inclusive (p <= alpha).
pub fn significant(result: &TestResult, alpha: f64) -> bool {
    result.p_two_sided <= alpha
}

#[inline]
fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

#[inline]
fn sum_sq_dev(xs: &[f64], m: f64) -> f64 {
    xs.iter().map(|x| (x - m) * (x - m)).sum()
}

/// Slice form used by the simulation engine; the caller guarantees both
/// slices hold at least two finite values.
pub(crate) fn pooled_t(a: &[f64], b: &[f64]) -> Result<TestResult> {
    let (n1, n2) = (a.len(), b.len());
    if n1 < 2 || n2 < 2 {
        return Err(domain(
            "n",
            n1.min(n2) as f64,
            "each group needs at least two observations",
        ));
    }
    let m1 = mean(a);
    let m2 = mean(b);
    let df = (n1 + n2 - 2) as f64;
    let pooled_var = (sum_sq_dev(a, m1) + sum_sq_dev(b, m2)) / df;
    if !(pooled_var > 0.0) {
        return Err(Error::Degenerate("pooled variance is zero"));
    }
    let se_diff = (pooled_var * (1.0 / n1 as f64 + 1.0 / n2 as f64)).sqrt();
    let observed_diff = m2 - m1;
    let t_stat = observed_diff / se_diff;
    Ok(TestResult {
        t_stat,
        df,
        p_two_sided: t_two_sided_p(t_stat, df),
        observed_diff,
        se_diff,
    })
}
