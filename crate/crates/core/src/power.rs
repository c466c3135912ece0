//! Power of the equal-n, two-sided, two-sample t test and the inverse
//! sample-size search.

use serde::{Deserialize, Serialize};

use crate::distributions::{noncentral_t_cdf, t_two_sided_p};
use crate::error::{check_open_probability, domain, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerQuery {
    pub n_per_group: u64,
    /// True mean difference in units of the common standard deviation.
    pub effect_size: f64,
    pub alpha: f64,
}

impl PowerQuery {
    pub fn new(n_per_group: u64, effect_size: f64, alpha: f64) -> Result<Self> {
        let q = Self {
            n_per_group,
            effect_size,
            alpha,
        };
        q.validate()?;
        Ok(q)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_per_group < 2 {
            return Err(domain(
                "n_per_group",
                self.n_per_group as f64,
                "needs at least two observations per group",
            ));
        }
        if !self.effect_size.is_finite() {
            return Err(domain("effect_size", self.effect_size, "must be finite"));
        }
        check_open_probability("alpha", self.alpha)?;
        Ok(())
    }

    pub fn df(&self) -> f64 {
        2.0 * self.n_per_group as f64 - 2.0
    }

    /// d·√(n/2)
    pub fn noncentrality(&self) -> f64 {
        self.effect_size * (self.n_per_group as f64 / 2.0).sqrt()
    }
}

/// Two-sided critical value: the t with P(|T| >= t) = alpha, by bisection on
/// the central t tail.
pub fn critical_t(alpha: f64, df: f64) -> Result<f64> {
    check_open_probability("alpha", alpha)?;
    if !(df > 0.0) {
        return Err(domain("df", df, "degrees of freedom must be positive"));
    }
    let mut hi = 1.0;
    while t_two_sided_p(hi, df) > alpha {
        hi *= 2.0;
        if hi > 1e300 {
            return Err(Error::Undefined("critical value overflows"));
        }
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if t_two_sided_p(mid, df) > alpha {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 4.0 * f64::EPSILON * hi {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// P(|T'| > t_crit) for T' noncentral t with df = 2n - 2 and ncp = d·√(n/2).
pub fn power_two_sample(q: &PowerQuery) -> Result<f64> {
    q.validate()?;
    let df = q.df();
    let ncp = q.noncentrality();
    let tc = critical_t(q.alpha, df)?;
    let upper = 1.0 - noncentral_t_cdf(tc, df, ncp)?;
    let lower = noncentral_t_cdf(-tc, df, ncp)?;
    Ok((upper + lower).clamp(0.0, 1.0))
}

/// Smallest n >= 2 per group whose power reaches `target_power`.
pub fn solve_n(target_power: f64, effect_size: f64, alpha: f64) -> Result<u64> {
    if !(target_power > 0.0 && target_power < 1.0) {
        return Err(domain(
            "target_power",
            target_power,
            "power must lie in (0, 1); a power of 1 is unreachable",
        ));
    }
    if effect_size == 0.0 || !effect_size.is_finite() {
        return Err(domain(
            "effect_size",
            effect_size,
            "a zero effect cannot be detected with any sample size",
        ));
    }
    check_open_probability("alpha", alpha)?;
    let power_at = |n: u64| power_two_sample(&PowerQuery::new(n, effect_size, alpha)?);

    if power_at(2)? >= target_power {
        return Ok(2);
    }
    let mut lo = 2u64;
    let mut hi = 4u64;
    while power_at(hi)? < target_power {
        lo = hi;
        hi = hi
            .checked_mul(2)
            .filter(|&h| h <= 1 << 40)
            .ok_or(Error::Undefined(
                "required sample size is unreasonably large",
            ))?;
    }
    // invariant: power(lo) < target <= power(hi)
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if power_at(mid)? >= target_power {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn power(n: u64, d: f64, alpha: f64) -> f64 {
        power_two_sample(&PowerQuery::new(n, d, alpha).unwrap()).unwrap()
    }

    #[test]
    fn critical_value_at_five_percent() {
        // 30 df: 2.042272456301238 (standard tables)
        assert_abs_diff_eq!(
            critical_t(0.05, 30.0).unwrap(),
            2.042272456301238,
            epsilon = 1e-9
        );
        assert_abs_diff_eq!(
            critical_t(0.05, 1e9).unwrap(),
            1.959963984540054,
            epsilon = 1e-6
        );
    }

    #[test]
    fn reference_powers() {
        assert_abs_diff_eq!(power(16, 1.0, 0.05), 0.78, epsilon = 0.005);
        assert_abs_diff_eq!(power(8, 1.0, 0.05), 0.46, epsilon = 0.005);
        assert_abs_diff_eq!(power(4, 1.0, 0.05), 0.22, epsilon = 0.005);
        assert_abs_diff_eq!(power(3, 1.0, 0.05), 0.157, epsilon = 0.003);
        assert_abs_diff_eq!(power(50, 1.0, 0.05), 0.9986, epsilon = 0.0005);
    }

    #[test]
    fn matches_independent_implementation() {
        // scipy.stats.nct with scipy.stats.t.ppf critical values
        let cases = [
            (2, 0.09520175549996385),
            (3, 0.1587908700052004),
            (4, 0.22318803069754348),
            (5, 0.28629549338059773),
            (8, 0.46123884950416055),
            (15, 0.7529230345034105),
            (16, 0.7813977924664228),
            (17, 0.8070367151472201),
            (50, 0.9986074227351127),
        ];
        for (n, want) in cases {
            assert_abs_diff_eq!(power(n, 1.0, 0.05), want, epsilon = 1e-8);
        }
    }

    #[test]
    fn symmetric_in_effect_sign() {
        assert_abs_diff_eq!(power(10, 0.7, 0.05), power(10, -0.7, 0.05), epsilon = 1e-12);
    }

    #[test]
    fn zero_effect_gives_alpha() {
        assert_abs_diff_eq!(power(12, 0.0, 0.05), 0.05, epsilon = 1e-12);
    }

    #[test]
    fn increasing_in_n_d_alpha() {
        for &alpha in &[0.01, 0.05, 0.1] {
            for &d in &[0.3, 0.8, 1.5] {
                let mut prev = 0.0;
                for n in 2..40 {
                    let p = power(n, d, alpha);
                    assert!(p > prev, "n at d={d} alpha={alpha}");
                    prev = p;
                }
            }
        }
        for n in [3, 10, 30] {
            let mut prev = 0.0;
            for k in 1..20 {
                let p = power(n, k as f64 * 0.1, 0.05);
                assert!(p > prev);
                prev = p;
            }
            let mut prev = 0.0;
            for k in 1..20 {
                let p = power(n, 0.8, k as f64 * 0.01);
                assert!(p > prev);
                prev = p;
            }
        }
    }

    #[test]
    fn solver_examples() {
        assert_eq!(solve_n(0.78, 1.0, 0.05).unwrap(), 16);
        assert_eq!(solve_n(0.22, 1.0, 0.05).unwrap(), 4);
        assert_eq!(solve_n(0.8, 1.0, 0.05).unwrap(), 17);
        assert!(solve_n(0.9, 1.0, 0.05).unwrap() > solve_n(0.5, 1.0, 0.05).unwrap());
        assert_eq!(solve_n(0.01, 1.0, 0.05).unwrap(), 2);
    }

    #[test]
    fn solver_never_overshoots() {
        for &d in &[0.4, 1.0, 2.0] {
            for n in [2, 3, 5, 9, 16, 33, 70] {
                let p = power(n, d, 0.05);
                if p < 1.0 {
                    assert!(solve_n(p, d, 0.05).unwrap() <= n);
                }
            }
        }
    }

    #[test]
    fn small_effects_need_large_samples() {
        let n = solve_n(0.8, 0.05, 0.05).unwrap();
        assert!(n > 5000, "{n}");
        assert!(power(n, 0.05, 0.05) >= 0.8);
        assert!(power(n - 1, 0.05, 0.05) < 0.8);
    }

    #[test]
    fn solver_domain_errors() {
        assert!(solve_n(1.0, 1.0, 0.05).is_err());
        assert!(solve_n(0.8, 0.0, 0.05).is_err());
        assert!(solve_n(0.8, 1.0, 1.0).is_err());
        assert!(PowerQuery::new(1, 1.0, 0.05).is_err());
    }
}
