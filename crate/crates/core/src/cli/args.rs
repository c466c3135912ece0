use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand};

use super::report::Format;
use fdrlab::montecarlo::{is_grid_aligned, DEFAULT_INFLATION_NS, DEFAULT_SEED, P_GRID_BINS};

#[derive(Debug, Parser)]
#[command(
    name = "fdrlab",
    version,
    about = "False discovery rates, exactly and by simulation"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tree diagram of a diagnostic screen.
    Screen(ScreenArgs),
    /// False discovery rate of a significance test, with the odds view.
    Fdr(FdrArgs),
    /// Minimum Bayes factor calibration of p values.
    Berger(BergerArgs),
    /// Power of the two-sample t test, or the n needed to reach a power.
    Power(PowerArgs),
    /// Simulate a batch of two-sample t tests, or a null/effect mixture.
    Simulate(SimulateArgs),
    /// Effect-size inflation among significant results across sample sizes.
    Inflation(InflationArgs),
}

#[derive(Debug, Args)]
pub struct FormatArg {
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct ScreenArgs {
    #[arg(long, value_parser = probability)]
    pub prevalence: f64,
    #[arg(long, value_parser = probability)]
    pub sensitivity: f64,
    #[arg(long, value_parser = probability)]
    pub specificity: f64,
    /// Report expected counts in a population of this size.
    #[arg(long, value_parser = positive)]
    pub population: Option<f64>,
    #[command(flatten)]
    pub out: FormatArg,
}

#[derive(Debug, Args)]
pub struct FdrArgs {
    #[arg(long, value_parser = probability)]
    pub prevalence: f64,
    #[arg(long, value_parser = probability, default_value_t = 0.8)]
    pub power: f64,
    #[arg(long, value_parser = probability, default_value_t = 0.05)]
    pub alpha: f64,
    /// Report expected counts over this many tests.
    #[arg(long, value_parser = positive)]
    pub n_tests: Option<f64>,
    #[command(flatten)]
    pub out: FormatArg,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("mode").required(true).args(["p", "table", "target_fdr"])))]
pub struct BergerArgs {
    /// Calibrate a single p value (valid for 0 < p < 1/e).
    #[arg(long, value_parser = finite)]
    pub p: Option<f64>,
    /// Print the standard calibration table.
    #[arg(long)]
    pub table: bool,
    /// Find the p value whose minimum false discovery rate is this value.
    #[arg(long, value_parser = finite)]
    pub target_fdr: Option<f64>,
    #[command(flatten)]
    pub out: FormatArg,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("mode").required(true).args(["n", "solve"])))]
pub struct PowerArgs {
    /// Observations per group.
    #[arg(long, value_parser = at_least_two)]
    pub n: Option<u64>,
    /// Find the smallest n per group reaching --target.
    #[arg(long, requires = "target")]
    pub solve: bool,
    #[arg(long, value_parser = probability)]
    pub target: Option<f64>,
    /// Effect size in standard deviations.
    #[arg(long, value_parser = finite, default_value_t = 1.0, allow_hyphen_values = true)]
    pub d: f64,
    #[arg(long, value_parser = open_probability, default_value_t = 0.05)]
    pub alpha: f64,
    #[command(flatten)]
    pub out: FormatArg,
}

#[derive(Debug, Args)]
pub struct BatchArgs {
    /// True difference between treatment and control means.
    #[arg(long, value_parser = finite, default_value_t = 1.0, allow_hyphen_values = true)]
    pub delta: f64,
    #[arg(long, value_parser = positive, default_value_t = 1.0)]
    pub sd: f64,
    #[arg(long, value_parser = at_least_one, default_value_t = 100_000)]
    pub n_sims: u64,
    #[arg(long, value_parser = open_probability, default_value_t = 0.05)]
    pub alpha: f64,
    #[arg(long, env = "FDRLAB_SEED", default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Worker threads; results do not depend on this.
    #[arg(long, value_parser = at_least_one_usize)]
    pub threads: Option<usize>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long, value_parser = at_least_two_usize, default_value_t = 16)]
    pub n_per_group: usize,
    #[command(flatten)]
    pub batch: BatchArgs,
    /// Mix a null batch and an effect batch with this share of real effects.
    #[arg(long, value_parser = probability)]
    pub prevalence: Option<f64>,
    /// Closed p-value interval `lo,hi` on the 0.001 grid.
    #[arg(long, value_parser = interval)]
    pub interval: Option<(f64, f64)>,
    /// Write the p-value histogram as CSV to this path.
    #[arg(long, conflicts_with = "prevalence")]
    pub emit_histogram: Option<PathBuf>,
    #[arg(long, value_parser = bin_width, default_value_t = 0.05)]
    pub bin_width: f64,
    #[command(flatten)]
    pub out: FormatArg,
}

#[derive(Debug, Args)]
pub struct InflationArgs {
    /// Comma-separated sample sizes per group (each at least 3).
    #[arg(long, value_delimiter = ',', value_parser = at_least_three,
          default_values_t = DEFAULT_INFLATION_NS)]
    pub n_list: Vec<usize>,
    #[command(flatten)]
    pub batch: BatchArgs,
    #[command(flatten)]
    pub out: FormatArg,
}

fn number(s: &str) -> Result<f64, String> {
    s.trim()
        .parse::<f64>()
        .map_err(|_| format!("`{s}` is not a number"))
}

fn finite(s: &str) -> Result<f64, String> {
    let v = number(s)?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err("must be finite".into())
    }
}

fn probability(s: &str) -> Result<f64, String> {
    let v = number(s)?;
    if (0.0..=1.0).contains(&v) {
        Ok(v)
    } else {
        Err("must lie in [0, 1]".into())
    }
}

fn open_probability(s: &str) -> Result<f64, String> {
    let v = number(s)?;
    if v > 0.0 && v < 1.0 {
        Ok(v)
    } else {
        Err("must lie strictly between 0 and 1".into())
    }
}

fn positive(s: &str) -> Result<f64, String> {
    let v = number(s)?;
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err("must be positive and finite".into())
    }
}

fn integer_at_least(s: &str, min: u64) -> Result<u64, String> {
    let v: u64 = s
        .trim()
        .parse()
        .map_err(|_| format!("`{s}` is not a whole number"))?;
    if v >= min {
        Ok(v)
    } else {
        Err(format!("must be at least {min}"))
    }
}

fn at_least_one(s: &str) -> Result<u64, String> {
    integer_at_least(s, 1)
}

fn at_least_one_usize(s: &str) -> Result<usize, String> {
    integer_at_least(s, 1).map(|v| v as usize)
}

fn at_least_two(s: &str) -> Result<u64, String> {
    integer_at_least(s, 2)
}

fn at_least_two_usize(s: &str) -> Result<usize, String> {
    integer_at_least(s, 2).map(|v| v as usize)
}

fn at_least_three(s: &str) -> Result<usize, String> {
    integer_at_least(s, 3).map(|v| v as usize)
}

fn interval(s: &str) -> Result<(f64, f64), String> {
    let (lo, hi) = s
        .split_once(',')
        .ok_or_else(|| "expected `lo,hi`".to_string())?;
    let (lo, hi) = (probability(lo)?, probability(hi)?);
    if !(is_grid_aligned(lo) && is_grid_aligned(hi)) {
        return Err("bounds must be multiples of 0.001".into());
    }
    if lo >= hi {
        return Err("lo must be below hi".into());
    }
    Ok((lo, hi))
}

fn bin_width(s: &str) -> Result<f64, String> {
    let w = number(s)?;
    let k = (w * P_GRID_BINS as f64).round() as usize;
    if w > 0.0 && is_grid_aligned(w) && P_GRID_BINS % k == 0 {
        Ok(w)
    } else {
        Err("must be a multiple of 0.001 that divides 1".into())
    }
}
