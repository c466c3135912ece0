use serde::{Deserialize, Serialize};

use super::{run_batch, SimConfig, SimSummary};
use crate::error::{check_probability, Error, Result};
use crate::fdr::{false_discovery_rate, significance_breakdown, Breakdown, TestScenario};

/// Paired null and effect batches mixed in proportion `prevalence`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MixtureSpec {
    pub prevalence: f64,
    pub null_summary: SimSummary,
    pub effect_summary: SimSummary,
}

impl MixtureSpec {
    pub fn new(
        prevalence: f64,
        null_summary: SimSummary,
        effect_summary: SimSummary,
    ) -> Result<Self> {
        check_probability("prevalence", prevalence)?;
        let (a, b) = (&null_summary.config, &effect_summary.config);
        if a.n_per_group != b.n_per_group
            || a.sd != b.sd
            || a.alpha != b.alpha
            || null_summary.n_sims != effect_summary.n_sims
        {
            return Err(Error::Config(
                "null and effect batches differ in n_per_group, sd, alpha or n_sims".into(),
            ));
        }
        Ok(Self {
            prevalence,
            null_summary,
            effect_summary,
        })
    }
}

/// Master seed of the effect batch paired with a null batch seeded `seed`.
pub fn effect_seed(seed: u64) -> u64 {
    seed ^ 0x9E37_79B9_7F4A_7C15
}

/// Runs the null batch (true difference 0) with `config.master_seed` and
/// the effect batch (the configured difference) with `effect_seed`.
pub fn simulate_mixture(prevalence: f64, config: &SimConfig) -> Result<MixtureSpec> {
    check_probability("prevalence", prevalence)?;
    let null = SimConfig {
        true_mean_treatment: config.true_mean_control,
        ..config.clone()
    };
    let effect = config.clone().with_seed(effect_seed(config.master_seed));
    MixtureSpec::new(prevalence, run_batch(&null)?, run_batch(&effect)?)
}

/// Tree diagram built from explicit significance rates.
pub fn mixture_fdr_from_rates(
    prevalence: f64,
    null_rate: f64,
    effect_rate: f64,
) -> Result<Breakdown> {
    significance_breakdown(
        &TestScenario::new(prevalence, effect_rate, null_rate)?,
        None,
    )
}

/// Tree diagram built from the simulated fractions of significant tests.
pub fn mixture_fdr(spec: &MixtureSpec) -> Result<Breakdown> {
    mixture_fdr_from_rates(
        spec.prevalence,
        spec.null_summary.fraction_significant(),
        spec.effect_summary.fraction_significant(),
    )
}

/// Prevalence-weighted share of null experiments among those with
/// lo <= p <= hi.
pub fn interval_fdr(spec: &MixtureSpec, lo: f64, hi: f64) -> Result<f64> {
    let null = spec.null_summary.count_in_interval(lo, hi)?;
    let effect = spec.effect_summary.count_in_interval(lo, hi)?;
    if null == 0 && effect == 0 {
        return Err(Error::Undefined(
            "no simulated p values fall in the interval",
        ));
    }
    let fp = (1.0 - spec.prevalence) * (null as f64 / spec.null_summary.n_sims as f64);
    let tp = spec.prevalence * (effect as f64 / spec.effect_summary.n_sims as f64);
    false_discovery_rate(fp, tp)
}
