use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::numtheory::PrimeTable;

use super::rng::fill_sign_words;
use super::sample::sign_at;

/// Empirical tail of `sum_p p^-sigma f(p)` against `exp(-gamma^2 / 2s)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubGaussianCheck {
    pub sigma: f64,
    pub k_primes: usize,
    pub gamma: f64,
    /// `sum_p p^(-2 sigma)` over the first `k_primes` primes.
    pub s: f64,
    pub samples: u64,
    pub exceedances: u64,
    pub empirical_tail: f64,
    /// Binomial standard error of `empirical_tail`.
    pub stderr: f64,
    pub bound: f64,
    pub seed: u64,
}

impl SubGaussianCheck {
    /// Whether the empirical tail stays under the bound plus `slack` standard errors.
    pub fn within(&self, slack: f64) -> bool {
        self.empirical_tail <= self.bound + slack * self.stderr
    }
}

/// `s = sum s_p^2` for `s_p = p^-sigma` over the first `k` primes of `pt`.
pub fn variance_proxy(sigma: f64, k: usize, pt: &PrimeTable) -> Result<f64> {
    let primes = first_primes(k, pt)?;
    Ok(primes.iter().map(|&p| (p as f64).powf(-2.0 * sigma)).sum())
}

fn first_primes(k: usize, pt: &PrimeTable) -> Result<&[u64]> {
    if k == 0 {
        return Err(Error::domain("k", "must be at least 1"));
    }
    pt.primes().get(..k).ok_or(Error::Domain {
        param: "k",
        reason: format!(
            "{k} primes requested but the table only holds {}",
            pt.primes().len()
        ),
    })
}

pub fn subgaussian_check(
    sigma: f64,
    k_primes: usize,
    gamma: f64,
    samples: u64,
    seed: u64,
    pt: &PrimeTable,
) -> Result<SubGaussianCheck> {
    if !(sigma > 0.5) {
        return Err(Error::domain("sigma", format!("{sigma} is not above 1/2")));
    }
    if !(gamma >= 0.0) {
        return Err(Error::domain("gamma", format!("{gamma} is negative")));
    }
    if samples == 0 {
        return Err(Error::domain("samples", "must be at least 1"));
    }
    let weights: Vec<f64> = first_primes(k_primes, pt)?
        .iter()
        .map(|&p| (p as f64).powf(-sigma))
        .collect();
    let s: f64 = weights.iter().map(|w| w * w).sum();
    let exceedances = (0..samples)
        .into_par_iter()
        .map_init(Vec::new, |words, stream| {
            fill_sign_words(seed, stream, k_primes, words);
            let total: f64 = weights
                .iter()
                .enumerate()
                .map(|(i, w)| w * f64::from(sign_at(words, i)))
                .sum();
            total >= gamma
        })
        .filter(|&hit| hit)
        .count() as u64;
    let n = samples as f64;
    let empirical_tail = exceedances as f64 / n;
    Ok(SubGaussianCheck {
        sigma,
        k_primes,
        gamma,
        s,
        samples,
        exceedances,
        empirical_tail,
        stderr: (empirical_tail * (1.0 - empirical_tail) / n).sqrt(),
        bound: (-gamma * gamma / (2.0 * s)).exp(),
        seed,
    })
}
