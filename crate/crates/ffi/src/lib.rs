//! C ABI for fdrlab.
//!
//! Every function returns an `FdrlabStatus` and writes its result through an
//! out-pointer. On failure, `fdrlab_last_error` returns a message for the
//! calling thread. Simulation results live behind the opaque
//! `FdrlabSimSummary` handle, released with `fdrlab_summary_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use fdrlab::fdr::{self, Breakdown, DiagnosticSpec, TestScenario};
use fdrlab::montecarlo::{self, MixtureSpec, SimConfig, SimSummary};
use fdrlab::power::{self, PowerQuery};
use fdrlab::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FdrlabStatus {
    Ok = 0,
    /// An argument is outside its domain or the configuration is invalid.
    InvalidArgument = 1,
    /// The requested quantity is undefined for these inputs.
    Undefined = 2,
    /// Input data are degenerate (e.g. zero variance).
    Degenerate = 3,
    NullPointer = 4,
    /// A bug inside the library; the message has details.
    Internal = 5,
}

/// Tree diagram cells and derived rates. `npv` and `fnr_among_negatives`
/// are NaN when no negatives are possible.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct FdrlabBreakdown {
    pub true_pos: f64,
    pub false_pos: f64,
    pub true_neg: f64,
    pub false_neg: f64,
    pub fdr: f64,
    pub ppv: f64,
    pub npv: f64,
    pub fnr_among_negatives: f64,
}

/// Odds on H0; infinite when the prevalence is zero.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct FdrlabOdds {
    pub prior_odds_h0: f64,
    pub likelihood_ratio_h0_h1: f64,
    pub posterior_odds_h0: f64,
    pub fdr: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct FdrlabSimConfig {
    pub n_per_group: u64,
    pub true_mean_control: f64,
    pub true_mean_treatment: f64,
    pub sd: f64,
    pub n_sims: u64,
    pub alpha: f64,
    pub master_seed: u64,
}

/// Scalar fields of a simulation summary. `mean_diff_significant` is NaN
/// when no test was significant.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct FdrlabSimStats {
    pub n_sims: u64,
    pub count_significant: u64,
    pub mean_diff_all: f64,
    pub sd_diff_all: f64,
    pub mean_diff_significant: f64,
    pub count_wrong_sign_significant: u64,
    pub master_seed: u64,
}

/// Opaque simulation result.
pub struct FdrlabSimSummary(SimSummary);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> FdrlabStatus {
    match e {
        Error::Domain { .. } | Error::Config(_) => FdrlabStatus::InvalidArgument,
        Error::Undefined(_) => FdrlabStatus::Undefined,
        Error::Degenerate(_) => FdrlabStatus::Degenerate,
    }
}

enum Fail {
    Lib(Error),
    Null(&'static str),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Lib(e)
    }
}

/// Runs `f`, converting errors and panics into a status and a message.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> FdrlabStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => FdrlabStatus::Ok,
        Ok(Err(Fail::Lib(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Ok(Err(Fail::Null(name))) => {
            set_error(format!("{name} is a null pointer"));
            FdrlabStatus::NullPointer
        }
        Err(panic) => {
            let msg = panic
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| panic.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("internal error: {msg}"));
            FdrlabStatus::Internal
        }
    }
}

unsafe fn write<T>(out: *mut T, name: &'static str, value: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail::Null(name));
    }
    out.write(value);
    Ok(())
}

unsafe fn summary<'a>(
    h: *const FdrlabSimSummary,
    name: &'static str,
) -> Result<&'a SimSummary, Fail> {
    h.as_ref().map(|s| &s.0).ok_or(Fail::Null(name))
}

fn scale(x: f64) -> Option<f64> {
    (x > 0.0).then_some(x)
}

impl From<&Breakdown> for FdrlabBreakdown {
    fn from(b: &Breakdown) -> Self {
        Self {
            true_pos: b.true_pos,
            false_pos: b.false_pos,
            true_neg: b.true_neg,
            false_neg: b.false_neg,
            fdr: b.fdr,
            ppv: b.ppv,
            npv: b.npv.unwrap_or(f64::NAN),
            fnr_among_negatives: b.fnr_among_negatives.unwrap_or(f64::NAN),
        }
    }
}

impl FdrlabSimConfig {
    fn to_config(self) -> Result<SimConfig, Fail> {
        let n_per_group = usize::try_from(self.n_per_group)
            .map_err(|_| Error::Config("n_per_group does not fit in memory".into()))?;
        Ok(SimConfig {
            n_per_group,
            true_mean_control: self.true_mean_control,
            true_mean_treatment: self.true_mean_treatment,
            sd: self.sd,
            n_sims: self.n_sims,
            alpha: self.alpha,
            master_seed: self.master_seed,
            retain_p_values: false,
        })
    }
}

/// Message for the last failure on this thread. The pointer stays valid
/// until the next failing call on the same thread; empty if none.
#[no_mangle]
pub extern "C" fn fdrlab_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Tree diagram of a significance test. Pass `n_tests <= 0` for
/// proportions instead of expected counts.
///
/// # Safety
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fdrlab_significance_breakdown(
    prevalence: f64,
    power: f64,
    alpha: f64,
    n_tests: f64,
    out: *mut FdrlabBreakdown,
) -> FdrlabStatus {
    guard(|| {
        let s = TestScenario::new(prevalence, power, alpha)?;
        let b = fdr::significance_breakdown(&s, scale(n_tests))?;
        write(out, "out", (&b).into())
    })
}

/// Tree diagram of a diagnostic screen. Pass `population <= 0` for
/// proportions.
///
/// # Safety
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fdrlab_screening_breakdown(
    prevalence: f64,
    sensitivity: f64,
    specificity: f64,
    population: f64,
    out: *mut FdrlabBreakdown,
) -> FdrlabStatus {
    guard(|| {
        let spec = DiagnosticSpec::new(prevalence, sensitivity, specificity)?;
        let b = fdr::screening_breakdown(&spec, scale(population))?;
        write(out, "out", (&b).into())
    })
}

/// # Safety
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fdrlab_posterior_odds(
    prevalence: f64,
    power: f64,
    alpha: f64,
    out: *mut FdrlabOdds,
) -> FdrlabStatus {
    guard(|| {
        let o = fdr::posterior_odds(&TestScenario::new(prevalence, power, alpha)?)?;
        write(
            out,
            "out",
            FdrlabOdds {
                prior_odds_h0: o.prior_odds_h0,
                likelihood_ratio_h0_h1: o.likelihood_ratio_h0_h1,
                posterior_odds_h0: o.posterior_odds_h0,
                fdr: o.fdr,
            },
        )
    })
}

/// Minimum Bayes factor -e p ln p, for 0 < p < 1/e.
///
/// # Safety
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fdrlab_berger_min_bayes_factor(p: f64, out: *mut f64) -> FdrlabStatus {
    guard(|| write(out, "out", fdr::berger_min_bayes_factor(p)?))
}

/// # Safety
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fdrlab_berger_min_fdr(p: f64, out: *mut f64) -> FdrlabStatus {
    guard(|| write(out, "out", fdr::berger_min_fdr(p)?))
}

/// # Safety
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fdrlab_alpha_for_target_fdr(target: f64, out: *mut f64) -> FdrlabStatus {
    guard(|| write(out, "out", fdr::alpha_for_target_fdr(target)?))
}

/// # Safety
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fdrlab_power_two_sample(
    n_per_group: u64,
    effect_size: f64,
    alpha: f64,
    out: *mut f64,
) -> FdrlabStatus {
    guard(|| {
        let q = PowerQuery::new(n_per_group, effect_size, alpha)?;
        write(out, "out", power::power_two_sample(&q)?)
    })
}

/// # Safety
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fdrlab_solve_n(
    target_power: f64,
    effect_size: f64,
    alpha: f64,
    out: *mut u64,
) -> FdrlabStatus {
    guard(|| {
        write(
            out,
            "out",
            power::solve_n(target_power, effect_size, alpha)?,
        )
    })
}

/// Defaults: n = 16 per group, both means 0, sd 1, 100000 tests,
/// alpha 0.05, seed 2014.
#[no_mangle]
pub extern "C" fn fdrlab_sim_config_default() -> FdrlabSimConfig {
    let c = SimConfig::default();
    FdrlabSimConfig {
        n_per_group: c.n_per_group as u64,
        true_mean_control: c.true_mean_control,
        true_mean_treatment: c.true_mean_treatment,
        sd: c.sd,
        n_sims: c.n_sims,
        alpha: c.alpha,
        master_seed: c.master_seed,
    }
}

/// Runs a batch. On success `*out` owns a new handle.
///
/// # Safety
/// `config` must be null or point to a valid config; `out` must be null or
/// valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fdrlab_simulate(
    config: *const FdrlabSimConfig,
    out: *mut *mut FdrlabSimSummary,
) -> FdrlabStatus {
    guard(|| {
        let c = config.as_ref().ok_or(Fail::Null("config"))?.to_config()?;
        if out.is_null() {
            return Err(Fail::Null("out"));
        }
        let s = montecarlo::run_batch(&c)?;
        out.write(Box::into_raw(Box::new(FdrlabSimSummary(s))));
        Ok(())
    })
}

/// Releases a handle; null is ignored.
///
/// # Safety
/// `summary` must be null or a handle from `fdrlab_simulate` that has not
/// been freed.
#[no_mangle]
pub unsafe extern "C" fn fdrlab_summary_free(summary: *mut FdrlabSimSummary) {
    if !summary.is_null() {
        drop(Box::from_raw(summary));
    }
}

/// # Safety
/// `summary` must be null or a live handle; `out` null or writable.
#[no_mangle]
pub unsafe extern "C" fn fdrlab_summary_stats(
    summary: *const FdrlabSimSummary,
    out: *mut FdrlabSimStats,
) -> FdrlabStatus {
    guard(|| {
        let s = self::summary(summary, "summary")?;
        write(
            out,
            "out",
            FdrlabSimStats {
                n_sims: s.n_sims,
                count_significant: s.count_significant,
                mean_diff_all: s.mean_diff_all,
                sd_diff_all: s.sd_diff_all,
                mean_diff_significant: s.mean_diff_significant.unwrap_or(f64::NAN),
                count_wrong_sign_significant: s.count_wrong_sign_significant,
                master_seed: s.config.master_seed,
            },
        )
    })
}

/// Number of tests with lo <= p <= hi; bounds on the 0.001 grid.
///
/// # Safety
/// `summary` must be null or a live handle; `out` null or writable.
#[no_mangle]
pub unsafe extern "C" fn fdrlab_summary_count_in_interval(
    summary: *const FdrlabSimSummary,
    lo: f64,
    hi: f64,
    out: *mut u64,
) -> FdrlabStatus {
    guard(|| {
        let s = self::summary(summary, "summary")?;
        write(out, "out", s.count_in_interval(lo, hi)?)
    })
}

/// Copies histogram counts for bins of `bin_width` into `counts`. The
/// number of bins is always written to `n_bins`; when `capacity` is too
/// small nothing is copied and the status is `InvalidArgument`.
///
/// # Safety
/// `summary` must be null or a live handle; `counts` must be null or valid
/// for `capacity` writes; `n_bins` null or writable.
#[no_mangle]
pub unsafe extern "C" fn fdrlab_summary_histogram(
    summary: *const FdrlabSimSummary,
    bin_width: f64,
    counts: *mut u64,
    capacity: usize,
    n_bins: *mut usize,
) -> FdrlabStatus {
    guard(|| {
        let s = self::summary(summary, "summary")?;
        let bins = s.histogram(bin_width)?;
        write(n_bins, "n_bins", bins.len())?;
        if capacity < bins.len() {
            return Err(Error::Config(format!("histogram needs {} slots", bins.len())).into());
        }
        if counts.is_null() {
            return Err(Fail::Null("counts"));
        }
        for (i, b) in bins.iter().enumerate() {
            counts.add(i).write(b.count);
        }
        Ok(())
    })
}

unsafe fn mixture(
    null: *const FdrlabSimSummary,
    effect: *const FdrlabSimSummary,
    prevalence: f64,
) -> Result<MixtureSpec, Fail> {
    let null = summary(null, "null_summary")?.clone();
    let effect = summary(effect, "effect_summary")?.clone();
    Ok(MixtureSpec::new(prevalence, null, effect)?)
}

/// FDR of a mixture of a null and an effect batch.
///
/// # Safety
/// Handles must be null or live; `out` null or writable.
#[no_mangle]
pub unsafe extern "C" fn fdrlab_mixture_fdr(
    null_summary: *const FdrlabSimSummary,
    effect_summary: *const FdrlabSimSummary,
    prevalence: f64,
    out: *mut FdrlabBreakdown,
) -> FdrlabStatus {
    guard(|| {
        let m = mixture(null_summary, effect_summary, prevalence)?;
        write(out, "out", (&montecarlo::mixture_fdr(&m)?).into())
    })
}

/// FDR among tests with lo <= p <= hi.
///
/// # Safety
/// Handles must be null or live; `out` null or writable.
#[no_mangle]
pub unsafe extern "C" fn fdrlab_interval_fdr(
    null_summary: *const FdrlabSimSummary,
    effect_summary: *const FdrlabSimSummary,
    prevalence: f64,
    lo: f64,
    hi: f64,
    out: *mut f64,
) -> FdrlabStatus {
    guard(|| {
        let m = mixture(null_summary, effect_summary, prevalence)?;
        write(out, "out", montecarlo::interval_fdr(&m, lo, hi)?)
    })
}

/// Master seed of the effect batch paired with a null batch seeded `seed`.
#[no_mangle]
pub extern "C" fn fdrlab_effect_seed(seed: u64) -> u64 {
    montecarlo::effect_seed(seed)
}
