use std::collections::BTreeMap;
use std::io::Write;

use serde::{Deserialize, Serialize};

use super::SimConfig;
use crate::error::{domain, Error, Result};

/// Number of p-value bins of width 0.001 collected per batch.
pub const P_GRID_BINS: usize = 1000;

#[inline]
fn grid_edge(k: usize) -> f64 {
    k as f64 / P_GRID_BINS as f64
}

/// Index k with edge(k) <= p < edge(k + 1); p = 1 lands in the last bin.
fn bin_index(p: f64) -> usize {
    let mut k = ((p * P_GRID_BINS as f64).floor().max(0.0) as usize).min(P_GRID_BINS - 1);
    while k > 0 && p < grid_edge(k) {
        k -= 1;
    }
    while k < P_GRID_BINS - 1 && p >= grid_edge(k + 1) {
        k += 1;
    }
    k
}

/// True when `x` is one of 0, 0.001, ..., 1.
pub fn is_grid_aligned(x: f64) -> bool {
    let k = (x * P_GRID_BINS as f64).round();
    (0.0..=P_GRID_BINS as f64).contains(&k) && grid_edge(k as usize) == x
}

fn grid_index(name: &'static str, x: f64) -> Result<usize> {
    if is_grid_aligned(x) {
        Ok((x * P_GRID_BINS as f64).round() as usize)
    } else {
        Err(domain(name, x, "must be a multiple of 0.001 within [0, 1]"))
    }
}

/// Running totals for a contiguous range of experiments.
pub(super) struct Accumulator {
    true_diff: f64,
    alpha: f64,
    n: u64,
    count_sig: u64,
    wrong_sign: u64,
    // differences centred on the true difference
    sum_c: f64,
    sum_c2: f64,
    sum_sig: f64,
    bins: Vec<u64>,
    on_grid: Vec<u64>,
    p_values: Option<Vec<f64>>,
}

impl Accumulator {
    pub(super) fn new(config: &SimConfig) -> Self {
        Self {
            true_diff: config.true_difference(),
            alpha: config.alpha,
            n: 0,
            count_sig: 0,
            wrong_sign: 0,
            sum_c: 0.0,
            sum_c2: 0.0,
            sum_sig: 0.0,
            bins: vec![0; P_GRID_BINS],
            on_grid: vec![0; P_GRID_BINS],
            p_values: config.retain_p_values.then(Vec::new),
        }
    }

    #[inline]
    pub(super) fn record(&mut self, p: f64, diff: f64) {
        self.n += 1;
        let c = diff - self.true_diff;
        self.sum_c += c;
        self.sum_c2 += c * c;
        if p <= self.alpha {
            self.count_sig += 1;
            self.sum_sig += diff;
            if diff * self.true_diff < 0.0 {
                self.wrong_sign += 1;
            }
        }
        let k = bin_index(p);
        self.bins[k] += 1;
        if k > 0 && p == grid_edge(k) {
            self.on_grid[k] += 1;
        }
        if let Some(v) = self.p_values.as_mut() {
            v.push(p);
        }
    }

    /// Appends `other`, which must cover the experiments right after ours.
    pub(super) fn merge(&mut self, other: Accumulator) {
        self.n += other.n;
        self.count_sig += other.count_sig;
        self.wrong_sign += other.wrong_sign;
        self.sum_c += other.sum_c;
        self.sum_c2 += other.sum_c2;
        self.sum_sig += other.sum_sig;
        for (a, b) in self.bins.iter_mut().zip(&other.bins) {
            *a += b;
        }
        for (a, b) in self.on_grid.iter_mut().zip(&other.on_grid) {
            *a += b;
        }
        if let (Some(mine), Some(theirs)) = (self.p_values.as_mut(), other.p_values) {
            mine.extend(theirs);
        }
    }

    pub(super) fn finish(self, config: SimConfig) -> SimSummary {
        let n = self.n as f64;
        let mean_c = self.sum_c / n;
        let sd = if self.n > 1 {
            ((self.sum_c2 - self.sum_c * mean_c) / (n - 1.0))
                .max(0.0)
                .sqrt()
        } else {
            0.0
        };
        let on_grid = self
            .on_grid
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(k, &c)| (k as u32, c))
            .collect();
        SimSummary {
            n_sims: self.n,
            count_significant: self.count_sig,
            mean_diff_all: self.true_diff + mean_c,
            sd_diff_all: sd,
            mean_diff_significant: (self.count_sig > 0)
                .then(|| self.sum_sig / self.count_sig as f64),
            count_wrong_sign_significant: self.wrong_sign,
            p_histogram: self.bins,
            p_on_grid: on_grid,
            p_values: self.p_values,
            config,
        }
    }
}

/// Aggregated outcome of a simulated batch.
///
/// `p_histogram[k]` counts p values in `[k/1000, (k+1)/1000)`, with the last
/// bin closed at 1. `p_on_grid` records how many p values fell exactly on
/// an interior grid point, which makes closed-interval counts exact.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimSummary {
    pub config: SimConfig,
    pub n_sims: u64,
    pub count_significant: u64,
    pub mean_diff_all: f64,
    /// Sample SD (n - 1 divisor); 0 for a single experiment.
    pub sd_diff_all: f64,
    /// Mean signed difference over significant experiments.
    pub mean_diff_significant: Option<f64>,
    /// Significant experiments whose observed difference has the opposite
    /// sign to the true difference (always 0 in a null batch).
    pub count_wrong_sign_significant: u64,
    pub p_histogram: Vec<u64>,
    pub p_on_grid: BTreeMap<u32, u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_values: Option<Vec<f64>>,
}

/// One bin of a coarsened p-value histogram.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HistogramBin {
    pub bin_left: f64,
    pub count: u64,
}

impl SimSummary {
    pub fn fraction_significant(&self) -> f64 {
        self.count_significant as f64 / self.n_sims as f64
    }

    /// Number of experiments with lo <= p <= hi. Both bounds must sit on the
    /// 0.001 grid.
    pub fn count_in_interval(&self, lo: f64, hi: f64) -> Result<u64> {
        let lo_k = grid_index("lo", lo)?;
        let hi_k = grid_index("hi", hi)?;
        if lo_k >= hi_k {
            return Err(Error::Config(format!(
                "interval [{lo}, {hi}] is empty: lo must be below hi"
            )));
        }
        let inside: u64 = self.p_histogram[lo_k..hi_k].iter().sum();
        let at_hi = if hi_k < P_GRID_BINS {
            self.p_on_grid.get(&(hi_k as u32)).copied().unwrap_or(0)
        } else {
            0
        };
        Ok(inside + at_hi)
    }

    /// Histogram with bins of `bin_width`, which must be a multiple of 0.001
    /// dividing 1 evenly. Bins are `[left, left + width)`, the last closed.
    pub fn histogram(&self, bin_width: f64) -> Result<Vec<HistogramBin>> {
        let w = grid_index("bin_width", bin_width)?;
        if w == 0 || P_GRID_BINS % w != 0 {
            return Err(domain(
                "bin_width",
                bin_width,
                "must be a positive multiple of 0.001 that divides 1",
            ));
        }
        Ok(self
            .p_histogram
            .chunks(w)
            .enumerate()
            .map(|(i, c)| HistogramBin {
                bin_left: grid_edge(i * w),
                count: c.iter().sum(),
            })
            .collect())
    }

    /// Writes the histogram as CSV with header `bin_left,count`.
    pub fn write_histogram_csv<W: Write>(&self, out: W, bin_width: f64) -> Result<()> {
        let bins = self.histogram(bin_width)?;
        let mut w = csv::Writer::from_writer(out);
        let io = |e: csv::Error| Error::Config(format!("cannot write histogram: {e}"));
        w.write_record(["bin_left", "count"]).map_err(io)?;
        for b in bins {
            w.write_record([b.bin_left.to_string(), b.count.to_string()])
                .map_err(io)?;
        }
        w.flush()
            .map_err(|e| Error::Config(format!("cannot write histogram: {e}")))?;
        Ok(())
    }
}

/// Mean and SD of the observed differences over every experiment.
pub fn diff_distribution_stats(summary: &SimSummary) -> (f64, f64) {
    (summary.mean_diff_all, summary.sd_diff_all)
}
