//! Primes whose Legendre partial sums `S_p(t) = sum_{n<=t} (n/p)` are all
//! non-negative.
//!
//! `(n/p)` is `p`-periodic with `(p/p) = 0` and `S_p(p) = 0`, so
//! `S_p(kp + r) = S_p(r)` and membership is decided by `t` in `1..=p-1`.

use num_rational::Ratio;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::numtheory::{fill_residue_signs, sieve};

/// Partial-sum trajectory summary for one odd prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CharacterWalk {
    pub p: u64,
    pub is_member: bool,
    /// Minimum of `S_p(t)` over `1 <= t <= p-1`.
    pub min_prefix: i64,
    /// First `t` with `S_p(t) < 0`.
    pub first_violation: Option<u64>,
    /// `S_p(p-1)`, always 0.
    pub final_sum: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanReport {
    pub limit: u64,
    pub members: Vec<u64>,
    /// `pi(limit)`, counting 2 even though it is never walked.
    pub primes_scanned: usize,
    /// `|members| / pi(limit)`.
    pub density_ratio: Ratio<u64>,
}

impl ScanReport {
    pub fn member_count(&self) -> usize {
        self.members.len()
    }
}

fn check_odd_prime(p: u64) -> Result<()> {
    let prime = p >= 3
        && p % 2 == 1
        && (3..)
            .step_by(2)
            .take_while(|d: &u64| d.saturating_mul(*d) <= p)
            .all(|d| !p.is_multiple_of(d));
    if prime {
        Ok(())
    } else {
        Err(Error::domain("p", format!("{p} is not an odd prime")))
    }
}

fn walk_signs(p: u64, signs: &[i8]) -> CharacterWalk {
    let mut sum = 0i64;
    let mut min_prefix = i64::MAX;
    let mut first_violation = None;
    for (i, &s) in signs.iter().enumerate() {
        sum += i64::from(s);
        min_prefix = min_prefix.min(sum);
        if sum < 0 && first_violation.is_none() {
            first_violation = Some(i as u64 + 1);
        }
    }
    CharacterWalk {
        p,
        is_member: first_violation.is_none(),
        min_prefix,
        first_violation,
        final_sum: sum,
    }
}

fn member_with(p: u64, buf: &mut Vec<i8>) -> bool {
    fill_residue_signs(p, buf).expect("odd prime");
    let mut sum = 0i64;
    for &s in buf.iter() {
        sum += i64::from(s);
        if sum < 0 {
            return false;
        }
    }
    true
}

/// Full trajectory summary for the odd prime `p`.
pub fn walk(p: u64) -> Result<CharacterWalk> {
    check_odd_prime(p)?;
    let mut buf = Vec::new();
    fill_residue_signs(p, &mut buf)?;
    Ok(walk_signs(p, &buf))
}

/// Membership test with early exit at the first negative partial sum.
pub fn is_member(p: u64) -> Result<bool> {
    check_odd_prime(p)?;
    Ok(member_with(p, &mut Vec::new()))
}

fn odd_primes_in(lo: u64, hi: u64) -> Result<Vec<u64>> {
    let pt = sieve(hi.max(2))?;
    Ok(pt
        .primes()
        .iter()
        .copied()
        .filter(|&p| p > lo && p >= 3)
        .collect())
}

fn members_among(primes: &[u64]) -> Vec<u64> {
    primes
        .par_iter()
        .map_init(Vec::new, |buf, &p| member_with(p, buf).then_some(p))
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}

/// Membership verdicts for every odd prime `<= limit`.
pub fn scan(limit: u64) -> Result<ScanReport> {
    if limit < 3 {
        return Err(Error::domain("limit", format!("{limit} is below 3")));
    }
    let odd = odd_primes_in(0, limit)?;
    let members = members_among(&odd);
    let primes_scanned = odd.len() + 1;
    Ok(ScanReport {
        limit,
        density_ratio: Ratio::new(members.len() as u64, primes_scanned as u64),
        members,
        primes_scanned,
    })
}

/// Full [`CharacterWalk`] for every odd prime `<= limit`, ascending.
pub fn scan_walks(limit: u64) -> Result<Vec<CharacterWalk>> {
    if limit < 3 {
        return Err(Error::domain("limit", format!("{limit} is below 3")));
    }
    let odd = odd_primes_in(0, limit)?;
    Ok(odd
        .par_iter()
        .map_init(Vec::new, |buf, &p| {
            fill_residue_signs(p, buf).expect("odd prime");
            walk_signs(p, buf)
        })
        .collect())
}

const NTH_START_LIMIT: u64 = 1 << 10;

/// The `k`-th member (1-based), growing the search range geometrically.
///
/// With `max_limit` set, gives up with [`Error::NotFound`] once the range
/// would pass it.
pub fn nth_member(k: usize, max_limit: Option<u64>) -> Result<u64> {
    if k == 0 {
        return Err(Error::domain("index", "must be at least 1"));
    }
    let mut found = 0usize;
    let mut lo = 0u64;
    let mut hi = NTH_START_LIMIT;
    loop {
        if let Some(cap) = max_limit {
            hi = hi.min(cap);
        }
        let members = members_among(&odd_primes_in(lo, hi)?);
        if found + members.len() >= k {
            return Ok(members[k - found - 1]);
        }
        found += members.len();
        if max_limit.is_some_and(|cap| hi >= cap) {
            return Err(Error::NotFound {
                index: k,
                limit: hi,
            });
        }
        lo = hi;
        hi = hi.saturating_mul(2);
    }
}
