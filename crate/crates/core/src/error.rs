use thiserror::Error;

/// Errors produced by the statistical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("{name} = {value} is out of range: {reason}")]
    Domain {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    /// The data admit no answer, e.g. a t test on constant samples.
    #[error("degenerate input: {0}")]
    Degenerate(&'static str),

    /// The requested quantity has no defined value for these inputs.
    #[error("undefined result: {0}")]
    Undefined(&'static str),

    /// A configuration is internally inconsistent.
    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(name: &'static str, value: f64, reason: &'static str) -> Error {
    Error::Domain {
        name,
        value,
        reason,
    }
}

/// Checks that `value` is a probability in the closed interval [0, 1].
pub(crate) fn check_probability(name: &'static str, value: f64) -> Result<f64> {
    if (0.0..=1.0).contains(&value) {
        Ok(value)
    } else {
        Err(domain(name, value, "must lie in [0, 1]"))
    }
}

/// Checks that `value` lies in the open interval (0, 1).
pub(crate) fn check_open_probability(name: &'static str, value: f64) -> Result<f64> {
    if value > 0.0 && value < 1.0 {
        Ok(value)
    } else {
        Err(domain(name, value, "must lie in (0, 1)"))
    }
}
