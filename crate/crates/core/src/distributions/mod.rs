//! Special functions and the random-number substrate.

mod beta;
mod noncentral_t;
mod normal;
mod rng;
mod student_t;

pub use beta::regularized_incomplete_beta;
pub use noncentral_t::noncentral_t_cdf;
pub use normal::{normal_cdf, normal_quantile};
pub use rng::{sample_normal, RngStream};
pub use student_t::student_t_cdf;

pub(crate) use student_t::t_two_sided_p;
