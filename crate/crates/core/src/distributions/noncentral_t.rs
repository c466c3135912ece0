//! Noncentral Student t CDF.
//!
//! For moderate noncentrality the CDF is the Poisson-weighted series of
//! incomplete beta terms (Lenth's AS 243 form):
//!
//! ```text
//! F(t; ν, δ) = Φ(-δ) + ½ Σ_j [ p_j I_x(j + ½, ν/2) + q_j I_x(j + 1, ν/2) ]
//! p_j = e^{-δ²/2} (δ²/2)^j / j!
//! q_j = δ e^{-δ²/2} (δ²/2)^j / (√2 Γ(j + 3/2)),   x = t² / (t² + ν)
//! ```
//!
//! valid for t >= 0; negative t uses F(t; ν, δ) = 1 - F(-t; ν, -δ).
//! Beyond |δ| = 40 the Poisson weights spread over too many terms and the
//! defining integral over the chi-square mixing density is used instead.

use libm::lgamma as ln_gamma;

use super::beta::inc_beta;
use super::normal::phi;
use super::student_t::{check_df, student_t_cdf};
use crate::error::{domain, Result};

const SERIES_NCP_LIMIT: f64 = 40.0;
const TAIL_TOL: f64 = 1e-16;

/// CDF of the noncentral t distribution with `df` degrees of freedom and
/// noncentrality `ncp`.
pub fn noncentral_t_cdf(t: f64, df: f64, ncp: f64) -> Result<f64> {
    check_df(df)?;
    if t.is_nan() {
        return Err(domain("t", t, "must not be NaN"));
    }
    if !ncp.is_finite() {
        return Err(domain("ncp", ncp, "must be finite"));
    }
    if ncp == 0.0 {
        return student_t_cdf(t, df);
    }
    if t.is_infinite() {
        return Ok(if t > 0.0 { 1.0 } else { 0.0 });
    }
    if ncp.abs() > SERIES_NCP_LIMIT || df.is_infinite() {
        Ok(by_integration(t, df, ncp))
    } else {
        Ok(by_series(t, df, ncp))
    }
}

pub(crate) fn by_series(t: f64, df: f64, ncp: f64) -> f64 {
    if t < 0.0 {
        1.0 - series_nonneg(-t, df, -ncp)
    } else {
        series_nonneg(t, df, ncp)
    }
}

fn series_nonneg(t: f64, df: f64, delta: f64) -> f64 {
    let base = phi(-delta);
    if t == 0.0 {
        return base;
    }
    let t2 = t * t;
    let x = t2 / (t2 + df);
    let y = df / (t2 + df);
    let half_df = 0.5 * df;
    let lambda = 0.5 * delta * delta;
    let ln_lambda = lambda.ln();
    let q_scale = delta / std::f64::consts::SQRT_2;

    // Poisson mass below this index is < e^-70; skip it.
    let j_start = (lambda - 12.0 * lambda.sqrt() - 12.0).max(0.0).floor() as u64;
    let mut sum = 0.0;
    let mut j = j_start;
    loop {
        let jf = j as f64;
        let ln_w = -lambda + jf * ln_lambda;
        let p_j = (ln_w - ln_gamma(jf + 1.0)).exp();
        let q_j = q_scale * (ln_w - ln_gamma(jf + 1.5)).exp();
        sum += p_j * inc_beta(jf + 0.5, half_df, x, y) + q_j * inc_beta(jf + 1.0, half_df, x, y);

        if jf > lambda {
            // Past the mode the weights fall at least geometrically with
            // ratio lambda / (j + 1); every beta factor is at most 1.
            let r = lambda / (jf + 1.0);
            let tail = (p_j + q_j.abs()) * r / (1.0 - r);
            if tail < TAIL_TOL {
                break;
            }
        }
        j += 1;
        if j > j_start + 1_000_000 {
            break;
        }
    }
    (base + 0.5 * sum).clamp(0.0, 1.0)
}

/// F(t) = ∫ Φ(t √(v/ν) - δ) χ²_ν(v) dv, integrated over u = ln v so the
/// integrand stays bounded for every ν > 0.
pub(crate) fn by_integration(t: f64, df: f64, ncp: f64) -> f64 {
    if df.is_infinite() {
        return phi(t - ncp);
    }
    let half_df = 0.5 * df;
    let ln_norm = half_df * std::f64::consts::LN_2 + ln_gamma(half_df);
    let integrand = |u: f64| {
        let v = u.exp();
        let dens = (half_df * u - 0.5 * v - ln_norm).exp();
        if dens == 0.0 {
            return 0.0;
        }
        phi(t * (v / df).sqrt() - ncp) * dens
    };
    let mode = df.ln();
    let lo = mode - 200.0 / df - 20.0;
    let hi = (df + 60.0 * (2.0 * df).sqrt() + 200.0).ln();
    let panels = 256;
    let width = (hi - lo) / panels as f64;
    let mut total = 0.0;
    for k in 0..panels {
        let a = lo + k as f64 * width;
        total += adaptive_simpson(&integrand, a, a + width, 1e-14, 40);
    }
    total.clamp(0.0, 1.0)
}

fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(f, a, b, fa, fm, fb, whole, tol, depth)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}
