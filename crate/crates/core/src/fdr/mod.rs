//! Exact false discovery rate arithmetic.
//!
//! Both a diagnostic screen and a significance test split a population
//! into the same four cells:
//!
//! ```text
//!                  positive            negative
//! real effect      prev * power        prev * (1 - power)
//! no effect        (1 - prev) * alpha  (1 - prev) * (1 - alpha)
//! ```
//!
//! For a screen, power is the sensitivity and alpha is one minus the
//! specificity. The false discovery rate is the share of positives that
//! come from the "no effect" row.

mod berger;

pub use berger::{
    alpha_for_target_fdr, berger_min_bayes_factor, berger_min_fdr, berger_table, BergerRow,
    REFERENCE_P_VALUES,
};

use serde::{Deserialize, Serialize};

use crate::error::{check_probability, domain, Error, Result};

/// Prevalence, sensitivity and specificity of a diagnostic screen.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticSpec {
    pub prevalence: f64,
    pub sensitivity: f64,
    pub specificity: f64,
}

impl DiagnosticSpec {
    pub fn new(prevalence: f64, sensitivity: f64, specificity: f64) -> Result<Self> {
        let spec = Self {
            prevalence,
            sensitivity,
            specificity,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        check_probability("prevalence", self.prevalence)?;
        check_probability("sensitivity", self.sensitivity)?;
        check_probability("specificity", self.specificity)?;
        Ok(())
    }

    /// The equivalent significance-test scenario.
    pub fn as_scenario(&self) -> TestScenario {
        TestScenario {
            prevalence: self.prevalence,
            power: self.sensitivity,
            alpha: 1.0 - self.specificity,
        }
    }
}

/// Prior probability of a real effect, power and significance level.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TestScenario {
    pub prevalence: f64,
    pub power: f64,
    pub alpha: f64,
}

impl TestScenario {
    pub fn new(prevalence: f64, power: f64, alpha: f64) -> Result<Self> {
        let s = Self {
            prevalence,
            power,
            alpha,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        check_probability("prevalence", self.prevalence)?;
        check_probability("power", self.power)?;
        check_probability("alpha", self.alpha)?;
        Ok(())
    }

    /// Non-fatal remarks about the scenario.
    pub fn warnings(&self) -> Vec<String> {
        let mut w = Vec::new();
        if self.power < self.alpha {
            w.push(format!(
                "power {} is below alpha {}: the test does worse than chance",
                self.power, self.alpha
            ));
        }
        w
    }
}

/// The four cells of the tree diagram and the rates derived from them.
///
/// Cells are probabilities summing to 1, or expected counts summing to the
/// population size when one was given.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Breakdown {
    pub true_pos: f64,
    pub false_pos: f64,
    pub true_neg: f64,
    pub false_neg: f64,
    pub fdr: f64,
    pub ppv: f64,
    /// `None` when no negative results are possible.
    pub npv: Option<f64>,
    pub fnr_among_negatives: Option<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl Breakdown {
    pub fn positives(&self) -> f64 {
        self.true_pos + self.false_pos
    }

    pub fn negatives(&self) -> f64 {
        self.true_neg + self.false_neg
    }

    pub fn total(&self) -> f64 {
        self.positives() + self.negatives()
    }
}

/// Share of positives that are false, `fp / (fp + tp)`.
///
/// Every route to an FDR in this crate (tree diagrams, posterior odds,
/// simulated mixtures) goes through this one expression so that the routes
/// agree bit for bit.
pub fn false_discovery_rate(false_pos: f64, true_pos: f64) -> Result<f64> {
    let positives = false_pos + true_pos;
    if !(positives > 0.0) {
        return Err(Error::Undefined("no positive results are possible"));
    }
    Ok(false_pos / positives)
}

fn check_scale(name: &'static str, scale: Option<f64>) -> Result<f64> {
    match scale {
        None => Ok(1.0),
        Some(s) if s > 0.0 && s.is_finite() => Ok(s),
        Some(s) => Err(domain(name, s, "must be positive and finite")),
    }
}

/// Tree diagram for a population in which a fraction `prevalence` carries
/// a real effect, detected with probability `p_pos_real`, while the rest
/// test positive with probability `p_pos_null`.
pub fn tree_breakdown(
    prevalence: f64,
    p_pos_real: f64,
    p_pos_null: f64,
    scale: Option<f64>,
) -> Result<Breakdown> {
    check_probability("prevalence", prevalence)?;
    check_probability("p_pos_real", p_pos_real)?;
    check_probability("p_pos_null", p_pos_null)?;
    let scale = check_scale("population", scale)?;

    let tp = prevalence * p_pos_real;
    let fneg = prevalence * (1.0 - p_pos_real);
    let fp = (1.0 - prevalence) * p_pos_null;
    let tn = (1.0 - prevalence) * (1.0 - p_pos_null);

    let fdr = false_discovery_rate(fp, tp)?;
    let negatives = tn + fneg;
    let (npv, fnr) = if negatives > 0.0 {
        (Some(tn / negatives), Some(fneg / negatives))
    } else {
        (None, None)
    };
    Ok(Breakdown {
        true_pos: tp * scale,
        false_pos: fp * scale,
        true_neg: tn * scale,
        false_neg: fneg * scale,
        fdr,
        ppv: tp / (fp + tp),
        npv,
        fnr_among_negatives: fnr,
        warnings: Vec::new(),
    })
}

/// Outcome breakdown of a diagnostic screen, optionally as expected counts
/// in a population of the given size.
pub fn screening_breakdown(spec: &DiagnosticSpec, population: Option<f64>) -> Result<Breakdown> {
    spec.validate()?;
    check_scale("population", population)?;
    tree_breakdown(
        spec.prevalence,
        spec.sensitivity,
        1.0 - spec.specificity,
        population,
    )
}

/// Outcome breakdown of a significance test, optionally as expected counts
/// over `n_tests` tests.
pub fn significance_breakdown(scenario: &TestScenario, n_tests: Option<f64>) -> Result<Breakdown> {
    scenario.validate()?;
    check_scale("n_tests", n_tests)?;
    let mut b = tree_breakdown(scenario.prevalence, scenario.power, scenario.alpha, n_tests)?;
    b.warnings = scenario.warnings();
    Ok(b)
}

/// Odds form of the same calculation: posterior odds on H0 are the prior
/// odds times the likelihood ratio alpha / power.
///
/// Odds are `f64::INFINITY` when the prevalence is zero; in JSON that is
/// written as the string `"inf"`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OddsResult {
    #[serde(with = "odds_serde")]
    pub prior_odds_h0: f64,
    pub likelihood_ratio_h0_h1: f64,
    #[serde(with = "odds_serde")]
    pub posterior_odds_h0: f64,
    pub fdr: f64,
}

impl OddsResult {
    pub fn is_infinite(&self) -> bool {
        self.posterior_odds_h0.is_infinite()
    }
}

pub fn posterior_odds(scenario: &TestScenario) -> Result<OddsResult> {
    scenario.validate()?;
    if scenario.power <= 0.0 {
        return Err(Error::Undefined(
            "power is zero, so no true positives are possible",
        ));
    }
    let lr = scenario.alpha / scenario.power;
    let fdr = false_discovery_rate(
        (1.0 - scenario.prevalence) * scenario.alpha,
        scenario.prevalence * scenario.power,
    )?;
    let (prior, posterior) = if scenario.prevalence == 0.0 {
        (f64::INFINITY, f64::INFINITY)
    } else {
        let prior = (1.0 - scenario.prevalence) / scenario.prevalence;
        (prior, prior * lr)
    };
    Ok(OddsResult {
        prior_odds_h0: prior,
        likelihood_ratio_h0_h1: lr,
        posterior_odds_h0: posterior,
        fdr,
    })
}

mod odds_serde {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_infinite() && *v > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(*v)
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Num(f64),
        Text(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Num(v) => Ok(v),
            Repr::Text(t) if t == "inf" => Ok(f64::INFINITY),
            Repr::Text(t) => Err(serde::de::Error::custom(format!("invalid odds {t:?}"))),
        }
    }
}
