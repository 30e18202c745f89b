use rayon::prelude::*;
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};
use crate::numtheory::PrimeTable;

use super::rng::fill_sign_words;
use super::sample::StepEvaluator;

pub const DEFAULT_CONFIDENCE: f64 = 0.95;

/// Two-sided normal quantile for a central `confidence` interval.
pub fn z_score(confidence: f64) -> f64 {
    let normal = Normal::new(0.0, 1.0).expect("standard normal");
    normal.inverse_cdf(0.5 + confidence / 2.0)
}

/// Wilson score interval for `successes` out of `trials`.
pub fn wilson_interval(successes: u64, trials: u64, confidence: f64) -> (f64, f64) {
    assert!(trials > 0, "wilson interval needs at least one trial");
    let n = trials as f64;
    let p = successes as f64 / n;
    let z = z_score(confidence);
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    // Rounding can push an endpoint past the point estimate when p is 0 or 1.
    let low = (center - half).clamp(0.0, 1.0).min(p);
    let high = (center + half).clamp(0.0, 1.0).max(p);
    (low, high)
}

/// Monte Carlo estimate of `m(N)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MCEstimate {
    pub n_max: u64,
    pub samples: u64,
    pub successes: u64,
    pub estimate: f64,
    /// 95% Wilson interval.
    pub ci_low: f64,
    pub ci_high: f64,
    pub seed: u64,
}

impl MCEstimate {
    /// Wilson interval at another confidence level.
    pub fn interval(&self, confidence: f64) -> (f64, f64) {
        wilson_interval(self.successes, self.samples, confidence)
    }

    pub fn contains(&self, value: f64) -> bool {
        self.ci_low <= value && value <= self.ci_high
    }
}

/// Fraction of random multiplicative functions whose partial sums up to
/// `n_max` never go negative. Sample `i` uses stream `i`.
pub fn mc_m(n_max: u64, samples: u64, seed: u64, pt: &PrimeTable) -> Result<MCEstimate> {
    if samples == 0 {
        return Err(Error::domain("samples", "must be at least 1"));
    }
    let eval = StepEvaluator::new(n_max, pt)?;
    let primes = eval.prime_count();
    let successes = (0..samples)
        .into_par_iter()
        .map_init(
            || (Vec::new(), Vec::new()),
            |(words, scratch), stream| {
                fill_sign_words(seed, stream, primes, words);
                eval.non_negative(words, n_max, scratch)
            },
        )
        .filter(|&ok| ok)
        .count() as u64;
    let (ci_low, ci_high) = wilson_interval(successes, samples, DEFAULT_CONFIDENCE);
    Ok(MCEstimate {
        n_max,
        samples,
        successes,
        estimate: successes as f64 / samples as f64,
        ci_low,
        ci_high,
        seed,
    })
}
