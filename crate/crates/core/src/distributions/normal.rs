//! Standard normal CDF and quantile.

use std::f64::consts::SQRT_2;

use libm::erfc;
use statrs::function::erf::erfc_inv;

use crate::error::{domain, Result};

/// Standard normal CDF, Φ(x).
///
/// Evaluated through `erfc` so that the lower tail keeps full relative
/// precision.
pub fn normal_cdf(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(domain("x", x, "must be finite"));
    }
    Ok(phi(x))
}

/// Inverse of [`normal_cdf`] on the open interval (0, 1).
pub fn normal_quantile(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(domain("p", p, "must lie in (0, 1)"));
    }
    Ok(phi_inv(p))
}

#[inline]
pub(crate) fn phi(x: f64) -> f64 {
    0.5 * erfc(-x / SQRT_2)
}

const FRAC_1_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

/// `erfc_inv` gives a start within ~1e-11; one Newton step against the
/// accurate CDF brings the result to full precision.
#[inline]
pub(crate) fn phi_inv(p: f64) -> f64 {
    let x = -SQRT_2 * erfc_inv(2.0 * p);
    let density = FRAC_1_SQRT_2PI * (-0.5 * x * x).exp();
    if density > 0.0 && x.is_finite() {
        x - (phi(x) - p) / density
    } else {
        x
    }
}
