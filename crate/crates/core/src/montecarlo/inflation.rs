use serde::{Deserialize, Serialize};

use super::{run_batch, SimConfig, SimSummary};
use crate::error::{domain, Error, Result};
use crate::power::{power_two_sample, PowerQuery};

/// Sample sizes per group of the classic inflation curve.
pub const DEFAULT_INFLATION_NS: [usize; 11] = [3, 4, 5, 6, 8, 10, 12, 14, 16, 20, 50];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InflationPoint {
    pub n: usize,
    pub power_analytic: f64,
    pub power_simulated: f64,
    /// Mean signed observed difference among significant tests.
    pub mean_diff_significant: f64,
    /// `mean_diff_significant` divided by the true difference.
    pub inflation: f64,
    pub count_wrong_sign_significant: u64,
}

/// Mean observed difference among significant tests, and how many of those
/// point the wrong way.
pub fn inflation_stats(summary: &SimSummary) -> Result<(f64, u64)> {
    let mean = summary
        .mean_diff_significant
        .ok_or(Error::Undefined("no test in the batch was significant"))?;
    Ok((mean, summary.count_wrong_sign_significant))
}

/// One fresh batch per n, all with the base configuration's seed.
pub fn inflation_curve(ns: &[usize], base: &SimConfig) -> Result<Vec<InflationPoint>> {
    let delta = base.true_difference();
    if delta == 0.0 {
        return Err(Error::Config(
            "inflation needs a nonzero true difference".into(),
        ));
    }
    ns.iter()
        .map(|&n| {
            if n < 3 {
                return Err(domain("n", n as f64, "inflation curve points need n >= 3"));
            }
            let config = SimConfig {
                n_per_group: n,
                ..base.clone()
            };
            let summary = run_batch(&config)?;
            let (mean, wrong) = inflation_stats(&summary)?;
            let power_analytic = power_two_sample(&PowerQuery::new(
                n as u64,
                config.effect_size(),
                config.alpha,
            )?)?;
            Ok(InflationPoint {
                n,
                power_analytic,
                power_simulated: summary.fraction_significant(),
                mean_diff_significant: mean,
                inflation: mean / delta,
                count_wrong_sign_significant: wrong,
            })
        })
        .collect()
}
