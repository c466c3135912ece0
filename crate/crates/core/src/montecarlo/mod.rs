//! Batches of simulated two-sample experiments.
//!
//! Experiment `i` of a batch draws `n` control values and then `n`
//! treatment values from `RngStream(master_seed, i)` and runs a pooled t
//! test on them. Experiments are grouped into fixed-size chunks that are
//! simulated in parallel and merged in chunk order, so a summary is
//! bit-identical for any number of worker threads.

mod inflation;
mod mixture;
mod summary;

pub use inflation::{inflation_curve, inflation_stats, InflationPoint, DEFAULT_INFLATION_NS};
pub use mixture::{
    effect_seed, interval_fdr, mixture_fdr, mixture_fdr_from_rates, simulate_mixture, MixtureSpec,
};
pub use summary::{
    diff_distribution_stats, is_grid_aligned, HistogramBin, SimSummary, P_GRID_BINS,
};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::distributions::RngStream;
use crate::error::{check_open_probability, domain, Error, Result};
use crate::ttest::pooled_t;
use summary::Accumulator;

/// Master seed used when none is given.
pub const DEFAULT_SEED: u64 = 2014;

/// Experiments per work unit. Fixed, so shard boundaries never depend on
/// the thread count.
const CHUNK: u64 = 2048;
/// Chunks simulated per parallel window; bounds memory held by partials.
const WINDOW: u64 = 256;

/// Full description of one simulated batch.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub n_per_group: usize,
    pub true_mean_control: f64,
    pub true_mean_treatment: f64,
    pub sd: f64,
    pub n_sims: u64,
    pub alpha: f64,
    pub master_seed: u64,
    /// Keep every p value in the summary (debugging aid; memory grows with
    /// `n_sims`).
    #[serde(default)]
    pub retain_p_values: bool,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            n_per_group: 16,
            true_mean_control: 0.0,
            true_mean_treatment: 0.0,
            sd: 1.0,
            n_sims: 100_000,
            alpha: 0.05,
            master_seed: DEFAULT_SEED,
            retain_p_values: false,
        }
    }
}

impl SimConfig {
    /// Null batch: both groups share a true mean of zero.
    pub fn null(n_per_group: usize, n_sims: u64, master_seed: u64) -> Self {
        Self {
            n_per_group,
            n_sims,
            master_seed,
            ..Self::default()
        }
    }

    /// Sets the treatment mean to control mean + `delta`.
    pub fn with_difference(mut self, delta: f64) -> Self {
        self.true_mean_treatment = self.true_mean_control + delta;
        self
    }

    pub fn with_seed(mut self, master_seed: u64) -> Self {
        self.master_seed = master_seed;
        self
    }

    pub fn true_difference(&self) -> f64 {
        self.true_mean_treatment - self.true_mean_control
    }

    /// True difference in units of the standard deviation.
    pub fn effect_size(&self) -> f64 {
        self.true_difference() / self.sd
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_per_group < 2 {
            return Err(domain(
                "n_per_group",
                self.n_per_group as f64,
                "needs at least two observations per group",
            ));
        }
        if self.n_sims < 1 {
            return Err(Error::Config("n_sims must be at least 1".into()));
        }
        if !(self.sd > 0.0) || !self.sd.is_finite() {
            return Err(domain("sd", self.sd, "must be positive and finite"));
        }
        if !self.true_mean_control.is_finite() || !self.true_mean_treatment.is_finite() {
            return Err(Error::Config("true means must be finite".into()));
        }
        check_open_probability("alpha", self.alpha)?;
        Ok(())
    }
}

/// Simulates the batch on the current rayon pool.
pub fn run_batch(config: &SimConfig) -> Result<SimSummary> {
    config.validate()?;
    let n_chunks = config.n_sims.div_ceil(CHUNK);
    let mut total = Accumulator::new(config);
    let mut start = 0;
    while start < n_chunks {
        let end = (start + WINDOW).min(n_chunks);
        let partials = (start..end)
            .into_par_iter()
            .map(|c| simulate_chunk(config, c * CHUNK, ((c + 1) * CHUNK).min(config.n_sims)))
            .collect::<Result<Vec<_>>>()?;
        for p in partials {
            total.merge(p);
        }
        start = end;
    }
    Ok(total.finish(config.clone()))
}

/// Simulates the batch on a dedicated pool with `threads` workers.
pub fn run_batch_with_threads(config: &SimConfig, threads: usize) -> Result<SimSummary> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))?;
    pool.install(|| run_batch(config))
}

fn simulate_chunk(config: &SimConfig, first: u64, end: u64) -> Result<Accumulator> {
    let n = config.n_per_group;
    let mut acc = Accumulator::new(config);
    let mut control = vec![0.0; n];
    let mut treatment = vec![0.0; n];
    for i in first..end {
        let mut rng = RngStream::new(config.master_seed, i);
        for x in control.iter_mut() {
            *x = config.true_mean_control + config.sd * rng.standard_normal();
        }
        for x in treatment.iter_mut() {
            *x = config.true_mean_treatment + config.sd * rng.standard_normal();
        }
        let r = pooled_t(&control, &treatment)?;
        acc.record(r.p_two_sided, r.observed_diff);
    }
    Ok(acc)
}
