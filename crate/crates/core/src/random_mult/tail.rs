//! Truncated estimates of `I(N) = integral_N^inf |M_f(u)| u^(-sigma-1) du`.
//!
//! Only `[N, U]` is integrated; nothing is extrapolated past `U`.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::numtheory::PrimeTable;

use super::rng::fill_sign_words;
use super::sample::{prefix_sums, StepEvaluator};

/// Abscissa as a function of the lower limit `N`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum SigmaRule {
    /// `1/2 + 3 ln ln N / ln N`
    #[default]
    HalfPlus,
    /// `1 + 3 ln ln N / ln N`
    OnePlus,
    Fixed(f64),
}

impl SigmaRule {
    /// Needs `n >= 3` for the presets, where `ln ln n > 0`.
    pub fn sigma(self, n: u64) -> f64 {
        let offset = || {
            let ln = (n as f64).ln();
            3.0 * ln.ln() / ln
        };
        match self {
            SigmaRule::HalfPlus => 0.5 + offset(),
            SigmaRule::OnePlus => 1.0 + offset(),
            SigmaRule::Fixed(s) => s,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailEstimate {
    pub n_lo: u64,
    pub sigma: f64,
    pub truncation: f64,
    pub samples: u64,
    pub mean_i: f64,
    pub stderr: f64,
    pub seed: u64,
}

/// `integral_N^U |M(u)| u^(-sigma-1) du` for the step function `M(u) = walk[floor(u) - 1]`.
///
/// `walk` must cover `floor(U)`.
pub fn integrate_walk(walk: &[i64], n_lo: u64, sigma: f64, truncation: f64) -> f64 {
    let top = truncation.floor() as u64;
    assert!(
        walk.len() as u64 >= top,
        "walk shorter than the truncation point"
    );
    let mut total = 0.0;
    for n in n_lo..=top {
        let a = n as f64;
        let b = ((n + 1) as f64).min(truncation);
        if b <= a {
            continue;
        }
        let height = walk[n as usize - 1].unsigned_abs() as f64;
        if height == 0.0 {
            continue;
        }
        // a^-s - b^-s = a^-s * (1 - (a/b)^s), kept accurate for b close to a.
        let piece = a.powf(-sigma) * -(-sigma * ((b - a) / a).ln_1p()).exp_m1() / sigma;
        total += height * piece;
    }
    total
}

pub fn tail_integral(
    n_lo: u64,
    sigma: f64,
    truncation: f64,
    samples: u64,
    seed: u64,
    pt: &PrimeTable,
) -> Result<TailEstimate> {
    if n_lo == 0 {
        return Err(Error::domain("n", "must be at least 1"));
    }
    if !(sigma > 0.5) {
        return Err(Error::domain("sigma", format!("{sigma} is not above 1/2")));
    }
    if !(truncation >= n_lo as f64) || !truncation.is_finite() {
        return Err(Error::domain(
            "truncation",
            format!("{truncation} is below the lower limit {n_lo}"),
        ));
    }
    if samples == 0 {
        return Err(Error::domain("samples", "must be at least 1"));
    }
    let estimate = |mean_i, stderr| TailEstimate {
        n_lo,
        sigma,
        truncation,
        samples,
        mean_i,
        stderr,
        seed,
    };
    if truncation == n_lo as f64 {
        return Ok(estimate(0.0, 0.0));
    }
    let top = truncation.floor() as u64;
    let eval = StepEvaluator::new(top, pt)?;
    let primes = eval.prime_count();
    let values: Vec<f64> = (0..samples)
        .into_par_iter()
        .map_init(
            || (Vec::new(), Vec::new()),
            |(words, steps), stream| {
                fill_sign_words(seed, stream, primes, words);
                eval.fill_steps(words, top, steps);
                integrate_walk(&prefix_sums(steps), n_lo, sigma, truncation)
            },
        )
        .collect();
    let n = samples as f64;
    let mean = values.iter().sum::<f64>() / n;
    let stderr = if samples > 1 {
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
        (var / n).sqrt()
    } else {
        0.0
    };
    Ok(estimate(mean, stderr))
}
