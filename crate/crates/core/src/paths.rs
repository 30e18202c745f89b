//! Exact counting of multiplicative sign sequences whose partial sums never
//! go negative ("incomplete" Dyck paths: no endpoint condition).
//!
//! A sign choice at each prime `<= N` extends completely multiplicatively to
//! `f(n)`, and `f(n)` only depends on the primes dividing `n` to an odd
//! power. With that set stored as a bitmask, `f(n) = (-1)^popcount(bits & mask[n])`.

use num_rational::Ratio;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::numtheory::{kernel_masks, KernelMaskTable, PrimeTable};

pub const DEFAULT_ENUMERATION_CAP: usize = 25;
/// Hard ceiling on the enumeration cap, whatever the caller asks for.
pub const MAX_ENUMERATION_CAP: usize = 40;

/// Signs at the primes `<= n_max`; bit `i` set means the `i`-th prime gets `-1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SignAssignment {
    pub n_max: u64,
    pub bits: u64,
}

impl SignAssignment {
    pub fn all_plus(n_max: u64) -> Self {
        SignAssignment { n_max, bits: 0 }
    }

    /// `f(n)` for `1 <= n <= kmt.n_max()`.
    #[inline]
    pub fn step(&self, n: u64, kmt: &KernelMaskTable) -> i8 {
        step_sign(self.bits, kmt.mask(n))
    }
}

#[inline]
fn step_sign(bits: u64, mask: u64) -> i8 {
    1 - 2 * ((bits & mask).count_ones() & 1) as i8
}

#[inline]
fn stays_non_negative(bits: u64, masks: &[u64]) -> bool {
    let mut sum = 0i32;
    for &mask in masks {
        sum += i32::from(step_sign(bits, mask));
        if sum < 0 {
            return false;
        }
    }
    true
}

/// Exact value of `m(N)`: Dyck assignments out of `2^pi(N)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MCountResult {
    pub n_max: u64,
    pub primes: usize,
    pub dyck_count: u64,
    pub total: u64,
}

impl MCountResult {
    pub fn m_value(&self) -> Ratio<u64> {
        Ratio::new(self.dyck_count, self.total)
    }

    pub fn m_f64(&self) -> f64 {
        self.dyck_count as f64 / self.total as f64
    }
}

fn check_table(n_max: u64, kmt: &KernelMaskTable) -> Result<()> {
    if n_max == 0 {
        return Err(Error::domain("n", "must be at least 1"));
    }
    if n_max > kmt.n_max() {
        return Err(Error::domain(
            "n",
            format!("{n_max} exceeds the mask table range {}", kmt.n_max()),
        ));
    }
    Ok(())
}

/// Whether every partial sum `f(1) + ... + f(t)`, `t <= a.n_max`, is `>= 0`.
pub fn is_incomplete_dyck(a: &SignAssignment, kmt: &KernelMaskTable) -> Result<bool> {
    check_table(a.n_max, kmt)?;
    Ok(stays_non_negative(a.bits, &kmt.masks()[..a.n_max as usize]))
}

fn check_cap(cap: usize) -> Result<()> {
    if cap > MAX_ENUMERATION_CAP {
        return Err(Error::domain(
            "cap",
            format!("{cap} is above the maximum {MAX_ENUMERATION_CAP}"),
        ));
    }
    Ok(())
}

fn prime_count(n_max: u64, kmt: &KernelMaskTable, cap: usize) -> Result<usize> {
    check_table(n_max, kmt)?;
    check_cap(cap)?;
    let k = kmt.primes().partition_point(|&p| p <= n_max);
    if k > cap {
        return Err(Error::EnumerationCap { required: k, cap });
    }
    Ok(k)
}

/// Counts all `2^pi(n_max)` assignments, refusing when `pi(n_max) > cap`.
pub fn exact_m(n_max: u64, kmt: &KernelMaskTable, cap: usize) -> Result<MCountResult> {
    let k = prime_count(n_max, kmt, cap)?;
    let masks = &kmt.masks()[..n_max as usize];
    let total = 1u64 << k;
    let dyck_count = (0..total)
        .into_par_iter()
        .filter(|&bits| stays_non_negative(bits, masks))
        .count() as u64;
    Ok(MCountResult {
        n_max,
        primes: k,
        dyck_count,
        total,
    })
}

/// [`exact_m`] by reflected Gray code, updating the step signs incrementally.
///
/// Sequential; kept as an independent route for cross-checking.
pub fn exact_m_gray(n_max: u64, kmt: &KernelMaskTable, cap: usize) -> Result<MCountResult> {
    let k = prime_count(n_max, kmt, cap)?;
    let masks = &kmt.masks()[..n_max as usize];
    // For each prime, the positions whose step flips when that prime's sign flips.
    let flips: Vec<Vec<usize>> = (0..k)
        .map(|i| {
            masks
                .iter()
                .enumerate()
                .filter(|(_, &m)| m >> i & 1 == 1)
                .map(|(n, _)| n)
                .collect()
        })
        .collect();
    let mut steps = vec![1i8; masks.len()];
    let check = |steps: &[i8]| {
        let mut sum = 0i32;
        steps.iter().all(|&s| {
            sum += i32::from(s);
            sum >= 0
        })
    };
    let total = 1u64 << k;
    let mut dyck_count = u64::from(check(&steps));
    for g in 1..total {
        let flipped = g.trailing_zeros() as usize;
        for &n in &flips[flipped] {
            steps[n] = -steps[n];
        }
        dyck_count += u64::from(check(&steps));
    }
    Ok(MCountResult {
        n_max,
        primes: k,
        dyck_count,
        total,
    })
}

/// [`exact_m`] straight from a prime table, refusing on the cap before any
/// mask table is built.
pub fn exact_m_from_primes(n_max: u64, pt: &PrimeTable, cap: usize) -> Result<MCountResult> {
    check_cap(cap)?;
    if n_max == 0 {
        return Err(Error::domain("n", "must be at least 1"));
    }
    if n_max > pt.limit() {
        return Err(Error::domain(
            "n",
            format!("{n_max} exceeds the prime table limit {}", pt.limit()),
        ));
    }
    let required = pt.pi(n_max);
    if required > cap {
        return Err(Error::EnumerationCap { required, cap });
    }
    exact_m(n_max, &kernel_masks(n_max, pt)?, cap)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Table1Row {
    pub n: usize,
    pub p_n: u64,
    pub count: MCountResult,
    pub m_ln_p: f64,
}

/// `exact_m` at `N = p_n` for `n = 2..=19`.
pub fn table1(pt: &PrimeTable) -> Result<Vec<Table1Row>> {
    const LAST: usize = 19;
    if pt.primes().len() < LAST {
        return Err(Error::domain(
            "prime table",
            format!("must contain the {LAST}th prime"),
        ));
    }
    let p_last = pt.primes()[LAST - 1];
    let kmt = kernel_masks(p_last, pt)?;
    (2..=LAST)
        .map(|n| {
            let p_n = pt.primes()[n - 1];
            let count = exact_m(p_n, &kmt, DEFAULT_ENUMERATION_CAP)?;
            Ok(Table1Row {
                n,
                p_n,
                count,
                m_ln_p: count.m_f64() * (p_n as f64).ln(),
            })
        })
        .collect()
}
