//! Acceptance criteria. Each test prints one PASS/FAIL line; run with
//! `cargo test -p multdyck-cli --test acceptance -- --nocapture --test-threads 1`.

use std::process::Command;
use std::time::{Duration, Instant};

use multdyck_core::lplus::{is_member, scan, scan_walks, walk};
use multdyck_core::numtheory::{kernel_masks, legendre, residue_sign_table, sieve};
use multdyck_core::paths::exact_m;
use multdyck_core::random_mult::{
    mc_m, second_moment_bruteforce, second_moment_formula, subgaussian_check, tail_integral,
    variance_proxy, SigmaRule,
};
use multdyck_core::Ratio;

fn report(id: &str, pass: bool, detail: &str) {
    println!(
        "criterion {id}: {} {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {id} failed: {detail}");
}

fn multdyck(args: &[&str]) -> (String, Duration) {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_multdyck"))
        .args(args)
        .env_remove("MULTDYCK_WORKERS")
        .output()
        .expect("binary runs");
    let elapsed = start.elapsed();
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    (String::from_utf8(out.stdout).unwrap(), elapsed)
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

const TABLE1_COUNTS: [u64; 18] = [
    3, 6, 10, 19, 37, 70, 137, 264, 521, 1020, 1990, 3898, 7686, 14894, 29700, 57591, 114098,
    225575,
];

/// Last column of the published table, n = 2..19.
const TABLE1_M_LN_P: [f64; 18] = [
    0.824, 1.207, 1.216, 1.424, 1.483, 1.549, 1.575, 1.618, 1.714, 1.71, 1.755, 1.767, 1.764,
    1.756, 1.799, 1.79, 1.788, 1.808,
];

#[test]
fn criterion_1_table1_counts() {
    let (single, t1) = multdyck(&["table1", "--workers", "1"]);
    let (eight, t8) = multdyck(&["table1", "--workers", "8"]);
    let rows = csv_rows(&single);
    let counts: Vec<u64> = rows.iter().map(|r| r[2].parse().unwrap()).collect();
    let ns: Vec<usize> = rows.iter().map(|r| r[0].parse().unwrap()).collect();
    let pass = counts == TABLE1_COUNTS
        && ns == (2..=19).collect::<Vec<_>>()
        && single == eight
        && t1 < Duration::from_secs(30)
        && t8 < Duration::from_secs(5);
    report(
        "1",
        pass,
        &format!("18 rows, counts {counts:?}; 1 worker {t1:?}, 8 workers {t8:?}"),
    );
}

#[test]
fn criterion_2_thousandth_member() {
    let (nth, t_nth) = multdyck(&["nth", "--index", "1000"]);
    let (count, t_scan) = multdyck(&["scan", "--limit", "55639", "--count-only"]);
    let pi = sieve(55639).unwrap().pi(55639);
    let report_ = scan(55639).unwrap();
    let ratio = report_.density_ratio;
    let inverted = pi as f64 / report_.member_count() as f64;
    let pass = nth.trim() == "55639"
        && count.trim() == "1000"
        && pi == 5646
        && report_.primes_scanned == 5646
        && ratio == Ratio::new(1000, 5646)
        && (inverted - 5.646).abs() < 1e-12
        && t_nth < Duration::from_secs(60)
        && t_scan < Duration::from_secs(60);
    report(
        "2",
        pass,
        &format!(
            "nth = {}, count = {}, pi = {pi}, pi/count = {inverted}; {t_nth:?}, {t_scan:?}",
            nth.trim(),
            count.trim()
        ),
    );
}

#[test]
fn criterion_3_bracketing_inequality() {
    let x = 55639f64;
    let lnx = x.ln();
    let lnlnx = lnx.ln();
    let middle = 5646.0 / 1000.0;
    let pass = (lnlnx - 2.39).abs() <= 0.01
        && (lnx - 10.92).abs() <= 0.01
        && lnlnx < middle
        && middle < lnx;
    report(
        "3",
        pass,
        &format!("ln ln x = {lnlnx:.4} < {middle} < ln x = {lnx:.4}"),
    );
}

#[test]
fn criterion_4_second_moment_identity() {
    let start = Instant::now();
    let pt = sieve(30).unwrap();
    let kmt = kernel_masks(30, &pt).unwrap();
    let mismatches: Vec<u64> = (1..=30)
        .filter(|&u| {
            second_moment_bruteforce(u, &kmt).unwrap()
                != Ratio::from_integer(second_moment_formula(u, &pt).unwrap())
        })
        .collect();
    let elapsed = start.elapsed();
    report(
        "4",
        mismatches.is_empty() && elapsed < Duration::from_secs(10),
        &format!("u = 1..30, mismatches {mismatches:?}, {elapsed:?}"),
    );
}

#[test]
fn criterion_5_monte_carlo_calibration() {
    let start = Instant::now();
    let truth = 225_575.0 / 524_288.0;
    let (text, _) = multdyck(&["mc-m", "--n", "67", "--samples", "1000000", "--seed", "7"]);
    let row = &csv_rows(&text)[0];
    let (lo, hi): (f64, f64) = (row[4].parse().unwrap(), row[5].parse().unwrap());
    let seed7 = lo <= truth && truth <= hi;

    let pt = sieve(67).unwrap();
    let estimates: Vec<_> = (1..=10u64)
        .map(|seed| mc_m(67, 1_000_000, seed, &pt).unwrap())
        .collect();
    let covered95 = estimates.iter().filter(|e| e.contains(truth)).count();
    let covered99 = estimates
        .iter()
        .filter(|e| {
            let (lo, hi) = e.interval(0.99);
            lo <= truth && truth <= hi
        })
        .count();
    let elapsed = start.elapsed();
    report(
        "5",
        seed7 && covered95 >= 8 && covered99 >= 8 && elapsed < Duration::from_secs(120),
        &format!(
            "seed 7 CI [{lo}, {hi}] vs {truth:.6}; seeds 1..10 cover {covered95}/10 at 95%, {covered99}/10 at 99%; {elapsed:?}"
        ),
    );
}

#[test]
fn criterion_6_subgaussian_bound() {
    let pt = sieve(1000).unwrap();
    let mut worst = f64::NEG_INFINITY;
    let mut failures = Vec::new();
    for &sigma in &[0.6, 1.1] {
        for &k in &[10usize, 100] {
            let s = variance_proxy(sigma, k, &pt).unwrap();
            for &c in &[0.5, 1.0, 2.0] {
                let r = subgaussian_check(sigma, k, c * s.sqrt(), 1_000_000, 2024, &pt).unwrap();
                worst = worst.max(r.empirical_tail - r.bound);
                if !r.within(5.0) {
                    failures.push((sigma, k, c, r.empirical_tail, r.bound));
                }
            }
        }
    }
    report(
        "6",
        failures.is_empty(),
        &format!("12 grid points, max(tail - bound) = {worst:.4}, failures {failures:?}"),
    );
}

#[test]
fn criterion_7_reciprocity_and_character_sums() {
    let mut failures = 0usize;
    let pt = sieve(10_000).unwrap();
    let odd = |limit: u64| {
        pt.primes()[1..]
            .iter()
            .copied()
            .take_while(move |&p| p <= limit)
    };

    for p in odd(200) {
        for q in odd(200).filter(|&q| q != p) {
            let lhs = legendre(p as i64, q).unwrap() * legendre(q as i64, p).unwrap();
            let rhs = if (p - 1) / 2 * ((q - 1) / 2) % 2 == 0 {
                1
            } else {
                -1
            };
            failures += usize::from(lhs != rhs);
        }
    }
    for p in odd(101) {
        for a in 1..p {
            for b in 1..p {
                let ab = legendre((a * b) as i64, p).unwrap();
                failures += usize::from(
                    ab != legendre(a as i64, p).unwrap() * legendre(b as i64, p).unwrap(),
                );
            }
        }
    }
    for p in odd(500) {
        let table = residue_sign_table(p).unwrap();
        failures += usize::from(table.iter().map(|&s| i64::from(s)).sum::<i64>() != 0);
        failures += usize::from(table.iter().filter(|&&s| s == 1).count() as u64 != (p - 1) / 2);
        for n in 0..p {
            // Euler's criterion by repeated multiplication.
            let mut r = 1u64;
            for _ in 0..(p - 1) / 2 {
                r = r * n % p;
            }
            let euler = match r {
                0 => 0,
                1 => 1,
                _ => -1,
            };
            failures += usize::from(legendre(n as i64, p).unwrap() != euler);
        }
    }
    let masks = kernel_masks(311, &pt).unwrap();
    for a in 1..=311u64 {
        for b in 1..=311 / a {
            failures += usize::from(masks.mask(a * b) != masks.mask(a) ^ masks.mask(b));
        }
    }
    for w in scan_walks(10_000).unwrap() {
        failures += usize::from(w.final_sum != 0);
        failures += usize::from(w.is_member != is_member(w.p).unwrap());
        failures += usize::from(w.is_member != (w.min_prefix >= 0));
    }
    for p in odd(1000).step_by(8).take(20) {
        let w = walk(p).unwrap();
        let mut direct = 0i64;
        let mut prefix = vec![0i64];
        for n in 1..p {
            prefix.push(prefix[n as usize - 1] + i64::from(legendre(n as i64, p).unwrap()));
        }
        for n in 1..=5 * p {
            direct += i64::from(legendre(n as i64, p).unwrap());
            failures += usize::from(direct != prefix[(n % p) as usize]);
        }
        failures += usize::from(w.final_sum != prefix[p as usize - 1]);
    }
    let big = scan(10_000).unwrap();
    for limit in [10u64, 500, 5000] {
        let restricted: Vec<u64> = big
            .members
            .iter()
            .copied()
            .filter(|&p| p <= limit)
            .collect();
        failures += usize::from(scan(limit).unwrap().members != restricted);
    }
    report("7", failures == 0, &format!("{failures} failures"));
}

#[test]
fn criterion_8a_monotone_m() {
    let pt = sieve(67).unwrap();
    let kmt = kernel_masks(67, &pt).unwrap();
    let values: Vec<Ratio<u64>> = (1..=67)
        .map(|n| exact_m(n, &kmt, 25).unwrap().m_value())
        .collect();
    let increases: Vec<u64> = values
        .windows(2)
        .enumerate()
        .filter(|(_, w)| w[1] > w[0])
        .map(|(i, _)| i as u64 + 2)
        .collect();
    report(
        "8a",
        increases.is_empty(),
        &format!("m(N) non-increasing over N = 1..67, m(67) = {}", values[66]),
    );
}

#[test]
fn criterion_8b_m_ln_p_column() {
    let (text, _) = multdyck(&["table1"]);
    let mismatches: Vec<String> = csv_rows(&text)
        .iter()
        .zip(TABLE1_M_LN_P)
        .filter_map(|(row, published)| {
            let n: u64 = row[0].parse().unwrap();
            let p: f64 = row[1].parse().unwrap();
            let count: f64 = row[2].parse().unwrap();
            let exact = count / 2f64.powi(n as i32) * p.ln();
            let rendered = format!("{exact:.3}");
            (rendered.parse::<f64>().unwrap() != published)
                .then(|| format!("n={n}: {rendered} vs {published}"))
        })
        .collect();
    report(
        "8b",
        mismatches.is_empty(),
        &format!("m(p_n) ln p_n to 3 decimals, mismatches {mismatches:?}"),
    );
}

#[test]
fn criterion_9_asymptotic_claims_substituted() {
    let pt = sieve(100_000).unwrap();
    let means: Vec<f64> = [100u64, 1000, 10_000]
        .iter()
        .map(|&n| {
            tail_integral(
                n,
                SigmaRule::HalfPlus.sigma(n),
                10.0 * n as f64,
                200,
                11,
                &pt,
            )
            .unwrap()
            .mean_i
        })
        .collect();
    let decreasing = means[0] > means[1] && means[1] > means[2];
    report(
        "9",
        decreasing,
        &format!(
            "asymptotic constants not checked; covered by 4-6 and truncated mean I(N) for N = 1e2, 1e3, 1e4: {means:?}"
        ),
    );
}
