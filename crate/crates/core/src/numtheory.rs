//! Sieve, quadratic character and squarefree-kernel primitives.
//!
//! Everything here is built once and then only read, so the tables can be
//! shared freely between worker threads.

use crate::error::{Error, Result};

/// Primes up to `limit` together with a least-prime-factor table.
#[derive(Debug, Clone)]
pub struct PrimeTable {
    limit: u64,
    primes: Vec<u64>,
    // smallest_factor[n] for 2 <= n <= limit; entries 0 and 1 are 0.
    smallest_factor: Vec<u32>,
}

impl PrimeTable {
    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// Number of primes `<= x`, for `x` within the table.
    pub fn pi(&self, x: u64) -> usize {
        self.primes.partition_point(|&p| p <= x)
    }

    /// Least prime factor of `n`, for `2 <= n <= limit`.
    pub fn smallest_factor(&self, n: u64) -> Option<u64> {
        if n < 2 || n > self.limit {
            return None;
        }
        Some(u64::from(self.smallest_factor[n as usize]))
    }

    /// `None` when `n` lies beyond the table.
    pub fn is_prime(&self, n: u64) -> Option<bool> {
        match n {
            0 | 1 => Some(false),
            _ => self.smallest_factor(n).map(|f| f == n),
        }
    }

    /// 0-based position of `p` in the prime list.
    pub fn index_of(&self, p: u64) -> Option<usize> {
        self.primes.binary_search(&p).ok()
    }

    /// Factorization of `n` as `(prime, exponent)` pairs in ascending order.
    pub fn factorize(&self, mut n: u64) -> Result<Vec<(u64, u32)>> {
        if n == 0 || n > self.limit {
            return Err(Error::domain(
                "n",
                format!("{n} is outside the factorization range 1..={}", self.limit),
            ));
        }
        let mut out: Vec<(u64, u32)> = Vec::new();
        while n > 1 {
            let p = u64::from(self.smallest_factor[n as usize]);
            match out.last_mut() {
                Some((q, e)) if *q == p => *e += 1,
                _ => out.push((p, 1)),
            }
            n /= p;
        }
        Ok(out)
    }
}

/// Least-prime-factor sieve up to `limit`.
pub fn sieve(limit: u64) -> Result<PrimeTable> {
    if limit < 2 {
        return Err(Error::domain("limit", format!("{limit} is below 2")));
    }
    if limit > u64::from(u32::MAX) {
        return Err(Error::Capacity {
            param: "limit",
            required: limit as usize,
            capacity: u32::MAX as usize,
        });
    }
    let len = limit as usize + 1;
    let mut smallest_factor = vec![0u32; len];
    let mut primes = Vec::new();
    for n in 2..len {
        if smallest_factor[n] == 0 {
            smallest_factor[n] = n as u32;
            primes.push(n as u64);
        }
        let spf = smallest_factor[n];
        // Linear sieve: each composite is written exactly once, by its least prime.
        for &p in &primes {
            if p as u32 > spf {
                break;
            }
            let m = n * p as usize;
            if m >= len {
                break;
            }
            smallest_factor[m] = p as u32;
        }
    }
    Ok(PrimeTable {
        limit,
        primes,
        smallest_factor,
    })
}

fn check_odd_modulus(p: u64) -> Result<()> {
    if p < 3 || p.is_multiple_of(2) {
        return Err(Error::domain("p", format!("{p} is not an odd prime")));
    }
    Ok(())
}

/// Legendre symbol `(n/p)` for an odd prime `p`, via the binary Jacobi algorithm.
///
/// Primality of `p` is the caller's responsibility; for composite odd `p`
/// the result is the Jacobi symbol.
pub fn legendre(n: i64, p: u64) -> Result<i8> {
    check_odd_modulus(p)?;
    let mut a = i128::from(n).rem_euclid(i128::from(p)) as u64;
    let mut m = p;
    let mut sign = 1i8;
    while a != 0 {
        let twos = a.trailing_zeros();
        a >>= twos;
        // (2/m) = -1 exactly when m = 3 or 5 (mod 8).
        if twos % 2 == 1 && matches!(m % 8, 3 | 5) {
            sign = -sign;
        }
        if a % 4 == 3 && m % 4 == 3 {
            sign = -sign;
        }
        std::mem::swap(&mut a, &mut m);
        a %= m;
    }
    Ok(if m == 1 { sign } else { 0 })
}

/// `(n/p)` for `n = 1..p-1`, index 0 holding `n = 1`.
///
/// Built by marking the squares `k^2 mod p`, `1 <= k <= (p-1)/2`.
pub fn residue_sign_table(p: u64) -> Result<Vec<i8>> {
    let mut table = Vec::new();
    fill_residue_signs(p, &mut table)?;
    Ok(table)
}

/// Same as [`residue_sign_table`], reusing `buf`.
pub fn fill_residue_signs(p: u64, buf: &mut Vec<i8>) -> Result<()> {
    check_odd_modulus(p)?;
    let len = (p - 1) as usize;
    buf.clear();
    buf.resize(len, -1);
    // k^2 mod p via successive odd increments: (k+1)^2 = k^2 + 2k + 1.
    let mut sq = 0u64;
    for k in 1..=(p - 1) / 2 {
        sq += 2 * k - 1;
        if sq >= p {
            sq -= p;
            if sq >= p {
                sq %= p;
            }
        }
        buf[(sq - 1) as usize] = 1;
    }
    Ok(())
}

/// Number of prime indices a [`KernelMask`] can hold.
pub const MASK_CAPACITY: usize = 64;

pub type KernelMask = u64;

/// For each `n <= n_max`, the set of primes dividing `n` to an odd power.
#[derive(Debug, Clone)]
pub struct KernelMaskTable {
    n_max: u64,
    primes: Vec<u64>,
    masks: Vec<KernelMask>,
}

impl KernelMaskTable {
    pub fn n_max(&self) -> u64 {
        self.n_max
    }

    /// Primes `<= n_max`; bit `i` of a mask refers to `primes()[i]`.
    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn prime_index(&self, p: u64) -> Option<usize> {
        self.primes.binary_search(&p).ok()
    }

    /// Mask of `n`, `1 <= n <= n_max`.
    #[inline]
    pub fn mask(&self, n: u64) -> KernelMask {
        self.masks[n as usize]
    }

    /// Masks for `1..=n_max`, index 0 holding `n = 1`.
    pub fn masks(&self) -> &[KernelMask] {
        &self.masks[1..]
    }
}

pub fn kernel_masks(n_max: u64, pt: &PrimeTable) -> Result<KernelMaskTable> {
    if n_max == 0 {
        return Err(Error::domain("n_max", "must be at least 1"));
    }
    if n_max > pt.limit {
        return Err(Error::domain(
            "n_max",
            format!("{n_max} exceeds the prime table limit {}", pt.limit),
        ));
    }
    let count = pt.pi(n_max);
    if count > MASK_CAPACITY {
        return Err(Error::Capacity {
            param: "n_max",
            required: count,
            capacity: MASK_CAPACITY,
        });
    }
    let primes = pt.primes[..count].to_vec();
    let mut index_of = vec![u8::MAX; n_max as usize + 1];
    for (i, &p) in primes.iter().enumerate() {
        index_of[p as usize] = i as u8;
    }
    let mut masks = vec![0 as KernelMask; n_max as usize + 1];
    for n in 2..=n_max as usize {
        let p = pt.smallest_factor[n] as usize;
        masks[n] = masks[n / p] ^ (1 << index_of[p]);
    }
    Ok(KernelMaskTable {
        n_max,
        primes,
        masks,
    })
}

/// `flags[n]` is true iff `n` is squarefree; index 0 is unused and false.
pub fn mobius_squarefree(u_max: u64, pt: &PrimeTable) -> Result<Vec<bool>> {
    if u_max == 0 {
        return Err(Error::domain("u_max", "must be at least 1"));
    }
    if u_max > pt.limit {
        return Err(Error::domain(
            "u_max",
            format!("{u_max} exceeds the prime table limit {}", pt.limit),
        ));
    }
    let len = u_max as usize + 1;
    let mut flags = vec![true; len];
    flags[0] = false;
    for n in 2..len {
        let p = pt.smallest_factor[n] as usize;
        let rest = n / p;
        flags[n] = flags[rest] && !rest.is_multiple_of(p);
    }
    Ok(flags)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn euler(n: i64, p: u64) -> i8 {
        let a = n.rem_euclid(p as i64) as u64;
        let mut r = 1u64;
        let mut base = a;
        let mut e = (p - 1) / 2;
        while e > 0 {
            if e & 1 == 1 {
                r = r * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        match r {
            0 => 0,
            1 => 1,
            _ => -1,
        }
    }

    #[test]
    fn sieve_small() {
        assert_eq!(sieve(10).unwrap().primes(), &[2, 3, 5, 7]);
        assert_eq!(sieve(2).unwrap().primes(), &[2]);
        assert!(matches!(sieve(1), Err(Error::Domain { .. })));
        assert!(matches!(sieve(0), Err(Error::Domain { .. })));
    }

    #[test]
    fn sieve_pi_55639() {
        let pt = sieve(55639).unwrap();
        assert_eq!(pt.primes().len(), 5646);
        assert_eq!(*pt.primes().last().unwrap(), 55639);
    }

    #[test]
    fn smallest_factor_invariants() {
        let pt = sieve(5000).unwrap();
        for &p in pt.primes() {
            assert_eq!(pt.smallest_factor(p), Some(p));
        }
        for n in 2..=5000u64 {
            let f = pt.smallest_factor(n).unwrap();
            assert_eq!(n % f, 0);
            if pt.index_of(n).is_none() {
                assert!(f < n);
            }
        }
        assert!(pt.primes().windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn factorize_reassembles() {
        let pt = sieve(2000).unwrap();
        for n in 1..=2000u64 {
            let prod: u64 = pt
                .factorize(n)
                .unwrap()
                .iter()
                .map(|&(p, e)| p.pow(e))
                .product();
            assert_eq!(prod, n);
        }
        assert_eq!(pt.factorize(360).unwrap(), vec![(2, 3), (3, 2), (5, 1)]);
    }

    #[test]
    fn legendre_examples() {
        assert_eq!(legendre(1, 7).unwrap(), 1);
        assert_eq!(legendre(2, 7).unwrap(), 1);
        assert_eq!(legendre(3, 7).unwrap(), -1);
        assert_eq!(legendre(14, 7).unwrap(), 0);
        assert_eq!(legendre(-1, 7).unwrap(), -1);
        assert_eq!(legendre(-1, 13).unwrap(), 1);
    }

    #[test]
    fn legendre_rejects_even_modulus() {
        for p in [0, 1, 2, 4, 100] {
            assert!(legendre(3, p).is_err(), "p = {p}");
        }
    }

    #[test]
    fn legendre_matches_euler_criterion() {
        let pt = sieve(500).unwrap();
        for &p in &pt.primes()[1..] {
            for n in -(p as i64)..=(2 * p as i64) {
                assert_eq!(legendre(n, p).unwrap(), euler(n, p), "({n}/{p})");
            }
        }
    }

    #[test]
    fn residue_tables_small() {
        assert_eq!(residue_sign_table(3).unwrap(), vec![1, -1]);
        assert_eq!(residue_sign_table(5).unwrap(), vec![1, -1, -1, 1]);
        assert_eq!(residue_sign_table(7).unwrap(), vec![1, 1, -1, 1, -1, -1]);
        assert!(residue_sign_table(2).is_err());
    }

    #[test]
    fn residue_table_matches_legendre() {
        let pt = sieve(3000).unwrap();
        for &p in &pt.primes()[1..] {
            let table = residue_sign_table(p).unwrap();
            assert_eq!(table.iter().map(|&s| i64::from(s)).sum::<i64>(), 0);
            assert_eq!(
                table.iter().filter(|&&s| s == 1).count() as u64,
                (p - 1) / 2
            );
            for (i, &s) in table.iter().enumerate() {
                assert_eq!(s, legendre(i as i64 + 1, p).unwrap());
            }
        }
    }

    #[test]
    fn kernel_mask_examples() {
        let pt = sieve(100).unwrap();
        let kmt = kernel_masks(100, &pt).unwrap();
        let bit = |p| 1u64 << kmt.prime_index(p).unwrap();
        assert_eq!(kmt.mask(1), 0);
        assert_eq!(kmt.mask(12), bit(3));
        assert_eq!(kmt.mask(36), 0);
        assert_eq!(kmt.mask(30), bit(2) | bit(3) | bit(5));
        assert_eq!(kmt.masks().len(), 100);
    }

    #[test]
    fn kernel_mask_errors() {
        let pt = sieve(1000).unwrap();
        assert!(matches!(kernel_masks(2000, &pt), Err(Error::Domain { .. })));
        // 311 is the 64th prime, 313 the 65th.
        assert!(kernel_masks(312, &pt).is_ok());
        assert_eq!(
            kernel_masks(313, &pt).unwrap_err(),
            Error::Capacity {
                param: "n_max",
                required: 65,
                capacity: 64
            }
        );
    }

    #[test]
    fn kernel_masks_xor_multiplicative() {
        let pt = sieve(312).unwrap();
        let kmt = kernel_masks(312, &pt).unwrap();
        for a in 1..=312u64 {
            for b in 1..=312 / a {
                assert_eq!(kmt.mask(a * b), kmt.mask(a) ^ kmt.mask(b));
            }
        }
        for m in 1..=17u64 {
            for k in 1..=312 / (m * m) {
                assert_eq!(kmt.mask(m * m * k), kmt.mask(k));
            }
        }
    }

    #[test]
    fn squarefree_flags() {
        let pt = sieve(1000).unwrap();
        let flags = mobius_squarefree(1000, &pt).unwrap();
        assert!(flags[1]);
        assert!(!flags[4]);
        assert!(flags[30]);
        for n in 1..=1000u64 {
            let brute = (2..=31u64).all(|d| n % (d * d) != 0);
            assert_eq!(flags[n as usize], brute, "n = {n}");
        }
        assert!(mobius_squarefree(1001, &pt).is_err());
    }
}
