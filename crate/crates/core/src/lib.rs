//! False discovery rates for screening and significance tests, computed
//! exactly from tree diagrams and by simulating two-sample t tests.

// `!(x > 0.0)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod distributions;
pub mod error;
pub mod fdr;
pub mod montecarlo;
pub mod power;
pub mod ttest;

pub use error::{Error, Result};
