//! Minimum Bayes factor calibration of p values.
//!
//! B(p) = -e p ln(p) is the smallest Bayes factor for H0 relative to H1
//! attainable by any prior on the alternative, valid for p < 1/e. Small B
//! favours a real effect. With even prior odds the implied minimum false
//! discovery rate is B / (1 + B). The logarithm is natural.

use std::f64::consts::E;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// p values of the classic calibration table.
pub const REFERENCE_P_VALUES: [f64; 6] = [0.2, 0.1, 0.05, 0.01, 0.005, 0.001];

const VALIDITY: &str = "the bound holds only for 0 < p < 1/e";

fn check_p(p: f64) -> Result<f64> {
    if p > 0.0 && p < 1.0 / E {
        Ok(p)
    } else {
        Err(domain("p", p, VALIDITY))
    }
}

pub fn berger_min_bayes_factor(p: f64) -> Result<f64> {
    let p = check_p(p)?;
    Ok(-E * p * p.ln())
}

/// Minimum false discovery rate α(p) = B / (1 + B).
pub fn berger_min_fdr(p: f64) -> Result<f64> {
    let b = berger_min_bayes_factor(p)?;
    Ok(b / (1.0 + b))
}

/// The p value whose minimum false discovery rate equals `target`, found by
/// bisection on ln p. Achievable targets lie strictly between 0 and 1/2.
pub fn alpha_for_target_fdr(target: f64) -> Result<f64> {
    let mut lo = f64::MIN_POSITIVE.ln();
    let mut hi = -1.0; // ln(1/e)
    let f = |ln_p: f64| {
        let b = -E * ln_p.exp() * ln_p;
        b / (1.0 + b)
    };
    if !(target > f(lo) && target < 0.5) {
        return Err(domain(
            "target",
            target,
            "achievable minimum false discovery rates lie in (0, 0.5)",
        ));
    }
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-15 * mid.abs() {
            break;
        }
    }
    Ok((0.5 * (lo + hi)).exp())
}

/// One row of the calibration table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BergerRow {
    pub p: f64,
    pub bayes_factor: f64,
    pub min_fdr: f64,
}

pub fn berger_table(p_values: &[f64]) -> Result<Vec<BergerRow>> {
    p_values
        .iter()
        .map(|&p| {
            Ok(BergerRow {
                p,
                bayes_factor: berger_min_bayes_factor(p)?,
                min_fdr: berger_min_fdr(p)?,
            })
        })
        .collect()
}
