use crate::error::{Error, Result};
use crate::numtheory::{kernel_masks, KernelMaskTable, PrimeTable, MASK_CAPACITY};

use super::rng::fill_sign_words;

/// One draw of a random completely multiplicative `f` on `1..=n_max`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RMFSample {
    pub n_max: u64,
    pub seed: u64,
    pub stream: u64,
    prime_count: usize,
    words: Vec<u64>,
}

impl RMFSample {
    pub fn prime_count(&self) -> usize {
        self.prime_count
    }

    /// Sign at the prime with 0-based index `i`.
    pub fn sign(&self, i: usize) -> i8 {
        assert!(i < self.prime_count, "prime index {i} out of range");
        sign_at(&self.words, i)
    }

    /// Low 64 sign bits, in the encoding of [`crate::paths::SignAssignment`].
    pub fn low_bits(&self) -> u64 {
        self.words.first().copied().unwrap_or(0)
    }

    /// `f(1), ..., f(n_max)`.
    pub fn steps(&self, eval: &StepEvaluator) -> Result<Vec<i8>> {
        eval.check_covers(self.n_max)?;
        let mut out = Vec::new();
        eval.fill_steps(&self.words, self.n_max, &mut out);
        Ok(out)
    }

    /// `M_f(1), ..., M_f(n_max)`.
    pub fn walk(&self, eval: &StepEvaluator) -> Result<Vec<i64>> {
        let steps = self.steps(eval)?;
        Ok(prefix_sums(&steps))
    }
}

#[inline]
pub(crate) fn sign_at(words: &[u64], i: usize) -> i8 {
    1 - 2 * ((words[i / 64] >> (i % 64)) & 1) as i8
}

pub(crate) fn prefix_sums(steps: &[i8]) -> Vec<i64> {
    steps
        .iter()
        .scan(0i64, |acc, &s| {
            *acc += i64::from(s);
            Some(*acc)
        })
        .collect()
}

/// Draws the signs at every prime `<= n_max` for `(seed, stream)`.
pub fn sample_assignment(n_max: u64, seed: u64, stream: u64, pt: &PrimeTable) -> Result<RMFSample> {
    if n_max == 0 {
        return Err(Error::domain("n_max", "must be at least 1"));
    }
    if n_max > pt.limit() {
        return Err(Error::domain(
            "n_max",
            format!("{n_max} exceeds the prime table limit {}", pt.limit()),
        ));
    }
    let prime_count = pt.pi(n_max);
    let mut words = Vec::new();
    fill_sign_words(seed, stream, prime_count, &mut words);
    Ok(RMFSample {
        n_max,
        seed,
        stream,
        prime_count,
        words,
    })
}

/// Least-prime-factor recurrence `f(n) = f(p) f(n/p)`, `p` the least prime of `n`.
#[derive(Debug, Clone)]
pub struct FactorPlan {
    n_max: u64,
    prime_count: usize,
    // Index 0 and 1 unused.
    lpf_index: Vec<u32>,
    cofactor: Vec<u32>,
}

impl FactorPlan {
    pub fn new(n_max: u64, pt: &PrimeTable) -> Result<Self> {
        if n_max == 0 || n_max > pt.limit() {
            return Err(Error::domain(
                "n_max",
                format!("{n_max} is outside 1..={}", pt.limit()),
            ));
        }
        let len = n_max as usize + 1;
        let mut lpf_index = vec![0u32; len];
        let mut cofactor = vec![0u32; len];
        let mut next_index = 0u32;
        for n in 2..len {
            let p = pt.smallest_factor(n as u64).expect("within table") as usize;
            if p == n {
                lpf_index[n] = next_index;
                next_index += 1;
            } else {
                lpf_index[n] = lpf_index[p];
            }
            cofactor[n] = (n / p) as u32;
        }
        Ok(FactorPlan {
            n_max,
            prime_count: next_index as usize,
            lpf_index,
            cofactor,
        })
    }
}

/// Turns sign words into step values `f(n)`.
///
/// Up to [`MASK_CAPACITY`] primes the kernel-mask parity is used; beyond
/// that, the least-prime-factor recurrence.
#[derive(Debug, Clone)]
pub enum StepEvaluator {
    Masks(KernelMaskTable),
    Factors(FactorPlan),
}

impl StepEvaluator {
    pub fn new(n_max: u64, pt: &PrimeTable) -> Result<Self> {
        if n_max <= pt.limit() && pt.pi(n_max) <= MASK_CAPACITY {
            Ok(StepEvaluator::Masks(kernel_masks(n_max, pt)?))
        } else {
            Self::factors(n_max, pt)
        }
    }

    pub fn factors(n_max: u64, pt: &PrimeTable) -> Result<Self> {
        Ok(StepEvaluator::Factors(FactorPlan::new(n_max, pt)?))
    }

    pub fn n_max(&self) -> u64 {
        match self {
            StepEvaluator::Masks(kmt) => kmt.n_max(),
            StepEvaluator::Factors(plan) => plan.n_max,
        }
    }

    pub fn prime_count(&self) -> usize {
        match self {
            StepEvaluator::Masks(kmt) => kmt.primes().len(),
            StepEvaluator::Factors(plan) => plan.prime_count,
        }
    }

    pub(crate) fn check_covers(&self, n: u64) -> Result<()> {
        if n > self.n_max() {
            return Err(Error::domain(
                "n_max",
                format!("{n} exceeds the step table range {}", self.n_max()),
            ));
        }
        Ok(())
    }

    /// Writes `f(1..=n)` into `out`; `n` must be covered.
    pub(crate) fn fill_steps(&self, words: &[u64], n: u64, out: &mut Vec<i8>) {
        out.clear();
        match self {
            StepEvaluator::Masks(kmt) => {
                let bits = words.first().copied().unwrap_or(0);
                out.extend(
                    kmt.masks()[..n as usize]
                        .iter()
                        .map(|&m| 1 - 2 * ((bits & m).count_ones() & 1) as i8),
                );
            }
            StepEvaluator::Factors(plan) => {
                out.reserve(n as usize);
                if n >= 1 {
                    out.push(1);
                }
                for k in 2..=n as usize {
                    let s = sign_at(words, plan.lpf_index[k] as usize)
                        * out[plan.cofactor[k] as usize - 1];
                    out.push(s);
                }
            }
        }
    }

    /// Whether all partial sums up to `n` stay `>= 0`, stopping at the first
    /// negative one. `scratch` is reused between calls.
    pub(crate) fn non_negative(&self, words: &[u64], n: u64, scratch: &mut Vec<i8>) -> bool {
        match self {
            StepEvaluator::Masks(kmt) => {
                let bits = words.first().copied().unwrap_or(0);
                let mut sum = 0i32;
                for &m in &kmt.masks()[..n as usize] {
                    sum += 1 - 2 * ((bits & m).count_ones() & 1) as i32;
                    if sum < 0 {
                        return false;
                    }
                }
                true
            }
            StepEvaluator::Factors(plan) => {
                scratch.clear();
                scratch.push(1);
                let mut sum = 1i64;
                for k in 2..=n as usize {
                    let s = sign_at(words, plan.lpf_index[k] as usize)
                        * scratch[plan.cofactor[k] as usize - 1];
                    scratch.push(s);
                    sum += i64::from(s);
                    if sum < 0 {
                        return false;
                    }
                }
                true
            }
        }
    }
}
