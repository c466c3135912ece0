//! Central Student t distribution.

use super::beta::inc_beta;
use crate::error::{domain, Result};

/// CDF of the central t distribution with `df` degrees of freedom.
pub fn student_t_cdf(t: f64, df: f64) -> Result<f64> {
    check_df(df)?;
    if t.is_nan() {
        return Err(domain("t", t, "must not be NaN"));
    }
    let upper = 0.5 * t_two_sided_p(t, df);
    Ok(if t > 0.0 { 1.0 - upper } else { upper })
}

pub(crate) fn check_df(df: f64) -> Result<()> {
    if df > 0.0 && !df.is_nan() {
        Ok(())
    } else {
        Err(domain("df", df, "degrees of freedom must be positive"))
    }
}

/// P(|T| >= |t|) for a central t variate, computed as I_x(df/2, 1/2) with
/// x = df / (df + t²). Both x and 1 - x are formed without subtraction.
#[inline]
pub(crate) fn t_two_sided_p(t: f64, df: f64) -> f64 {
    let t2 = t * t;
    if t2.is_infinite() {
        return 0.0;
    }
    if df.is_infinite() {
        return 2.0 * super::normal::phi(-t.abs());
    }
    let denom = df + t2;
    inc_beta(0.5 * df, 0.5, df / denom, t2 / denom)
}
