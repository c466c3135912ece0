//! Seeded, splittable random streams and normal sampling.
//!
//! Every stream is a ChaCha8 keystream keyed by the master seed and
//! positioned on its own 64-bit stream id, so experiment `i` of a batch
//! always sees the same draws no matter which worker runs it.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use super::normal::phi_inv;
use crate::error::{domain, Result};

/// Independent random substream identified by `(master_seed, stream_index)`.
#[derive(Clone, Debug)]
pub struct RngStream {
    master_seed: u64,
    stream_index: u64,
    rng: ChaCha8Rng,
}

impl RngStream {
    pub fn new(master_seed: u64, stream_index: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
        rng.set_stream(stream_index);
        Self {
            master_seed,
            stream_index,
            rng,
        }
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn stream_index(&self) -> u64 {
        self.stream_index
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    /// Uniform draw on the open interval (0, 1) with 53 random bits.
    #[inline]
    pub fn next_open01(&mut self) -> f64 {
        ((self.rng.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
    }

    /// Standard normal draw by inverse-CDF transform: exactly one uniform
    /// is consumed per draw.
    #[inline]
    pub fn standard_normal(&mut self) -> f64 {
        phi_inv(self.next_open01())
    }
}

/// Draws one value from N(mean, sd²), advancing `stream`.
pub fn sample_normal(stream: &mut RngStream, mean: f64, sd: f64) -> Result<f64> {
    if !(sd > 0.0) || !sd.is_finite() {
        return Err(domain("sd", sd, "must be positive and finite"));
    }
    if !mean.is_finite() {
        return Err(domain("mean", mean, "must be finite"));
    }
    Ok(mean + sd * stream.standard_normal())
}
