//! `E M_f(u)^2` three ways.
//!
//! `f(a) f(b)` has mean 1 when `ab` is a square and 0 otherwise, and `ab` is
//! a square exactly when `a` and `b` share their squarefree part `d`. Grouping
//! `n <= u` by `d` gives `sum_{d squarefree} floor(sqrt(u/d))^2`.

use std::collections::HashMap;

use num_rational::Ratio;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::numtheory::{mobius_squarefree, KernelMaskTable, PrimeTable};

use super::rng::fill_sign_words;
use super::sample::StepEvaluator;

/// Largest prime count [`second_moment_bruteforce`] will enumerate.
pub const BRUTE_FORCE_CAP: usize = 22;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentRecord {
    pub u: u64,
    pub formula_value: Option<u64>,
    /// Average over all sign assignments.
    pub exact_value: Option<Ratio<u64>>,
    pub mc_value: Option<f64>,
}

impl MomentRecord {
    /// False only when both exact routes ran and disagree.
    pub fn consistent(&self) -> bool {
        match (self.formula_value, self.exact_value) {
            (Some(f), Some(e)) => e == Ratio::from_integer(f),
            _ => true,
        }
    }
}

fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

pub fn second_moment_formula(u: u64, pt: &PrimeTable) -> Result<u64> {
    if u == 0 {
        return Err(Error::domain("u", "must be at least 1"));
    }
    let squarefree = mobius_squarefree(u, pt)?;
    Ok((1..=u)
        .filter(|&d| squarefree[d as usize])
        .map(|d| {
            let r = isqrt(u / d);
            r * r
        })
        .sum())
}

/// Exact mean of `M_f(u)^2` over all `2^pi(u)` sign assignments.
pub fn second_moment_bruteforce(u: u64, kmt: &KernelMaskTable) -> Result<Ratio<u64>> {
    if u == 0 {
        return Err(Error::domain("u", "must be at least 1"));
    }
    if u > kmt.n_max() {
        return Err(Error::domain(
            "u",
            format!("{u} exceeds the mask table range {}", kmt.n_max()),
        ));
    }
    let k = kmt.primes().partition_point(|&p| p <= u);
    if k > BRUTE_FORCE_CAP {
        return Err(Error::EnumerationCap {
            required: k,
            cap: BRUTE_FORCE_CAP,
        });
    }
    // M_f(u) only depends on how many n <= u share each kernel mask.
    let mut multiplicity: HashMap<u64, i64> = HashMap::new();
    for &m in &kmt.masks()[..u as usize] {
        *multiplicity.entry(m).or_default() += 1;
    }
    let mut groups: Vec<(u64, i64)> = multiplicity.into_iter().collect();
    groups.sort_unstable();
    let total = 1u64 << k;
    let sum_sq: u64 = (0..total)
        .into_par_iter()
        .map(|bits| {
            let m: i64 = groups
                .iter()
                .map(|&(mask, c)| {
                    if (bits & mask).count_ones() & 1 == 0 {
                        c
                    } else {
                        -c
                    }
                })
                .sum();
            (m * m) as u64
        })
        .sum();
    Ok(Ratio::new(sum_sq, total))
}

/// Sample mean of `M_f(u)^2`; sample `i` uses stream `i`.
pub fn second_moment_mc(u: u64, samples: u64, seed: u64, pt: &PrimeTable) -> Result<f64> {
    if samples == 0 {
        return Err(Error::domain("samples", "must be at least 1"));
    }
    let eval = StepEvaluator::new(u, pt)?;
    let primes = eval.prime_count();
    let squares: Vec<u64> = (0..samples)
        .into_par_iter()
        .map_init(
            || (Vec::new(), Vec::new()),
            |(words, steps), stream| {
                fill_sign_words(seed, stream, primes, words);
                eval.fill_steps(words, u, steps);
                let m: i64 = steps.iter().map(|&s| i64::from(s)).sum();
                (m * m) as u64
            },
        )
        .collect();
    Ok(squares.iter().sum::<u64>() as f64 / samples as f64)
}
