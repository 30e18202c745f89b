//! Command-line front end.
//!
//! Exit status: 0 on success, 2 on usage errors, 1 when an operation
//! rejects its parameters or hits a capacity limit.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod output;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use multdyck_core::lplus::{nth_member, scan, scan_walks};
use multdyck_core::numtheory::{kernel_masks, sieve, PrimeTable};
use multdyck_core::paths::{exact_m_from_primes, table1, DEFAULT_ENUMERATION_CAP};
use multdyck_core::random_mult::{
    mc_m, sample_assignment, second_moment_bruteforce, second_moment_formula, subgaussian_check,
    tail_integral, zeta_truncated, SigmaRule, StepEvaluator, BRUTE_FORCE_CAP,
};
use multdyck_core::Error;

use output::{Cell, Echo, Format, Table};

#[derive(Debug, Parser)]
#[command(
    name = "multdyck",
    version,
    about = "Legendre partial sums, multiplicative Dyck paths and random multiplicative functions"
)]
pub struct Cli {
    /// Worker threads [default: available parallelism]
    #[arg(long, global = true, env = "MULTDYCK_WORKERS")]
    workers: Option<usize>,

    /// Output format
    #[arg(long, global = true, value_enum, default_value = "csv")]
    format: Format,

    /// Write output to PATH instead of standard output
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Walk every odd prime up to a limit and report which have non-negative Legendre partial sums
    Scan(ScanArgs),
    /// Find the K-th prime with non-negative Legendre partial sums
    Nth(NthArgs),
    /// Count exactly the multiplicative sign patterns at primes <= N whose partial sums stay non-negative
    ExactM(ExactMArgs),
    /// Exact counts at N = p_n for n = 2..19
    Table1,
    /// Monte Carlo estimate of the non-negative proportion with a 95% Wilson interval
    McM(McMArgs),
    /// Second moment of the summatory function: closed form and exhaustive average
    Moments(MomentsArgs),
    /// Empirical tail of a weighted Rademacher sum against the sub-Gaussian bound
    Subgaussian(SubgaussianArgs),
    /// Truncated tail integral of |M_f(u)| u^(-sigma-1) averaged over samples
    Tail(TailArgs),
    /// Truncated random Dirichlet series sum f(n) n^-(sigma + it)
    Zeta(ZetaArgs),
}

#[derive(Debug, Args)]
struct ScanArgs {
    /// Largest prime to walk
    #[arg(long, value_name = "X")]
    limit: u64,
    /// Print only the number of members
    #[arg(long)]
    count_only: bool,
}

#[derive(Debug, Args)]
struct NthArgs {
    /// 1-based position of the member
    #[arg(long, value_name = "K")]
    index: usize,
    /// Give up once the search range passes X [default: unbounded]
    #[arg(long, value_name = "X")]
    max_limit: Option<u64>,
}

#[derive(Debug, Args)]
struct ExactMArgs {
    /// Path length; fractional values are floored
    #[arg(long, value_name = "N")]
    n: f64,
    /// Refuse to enumerate when more than C primes are involved
    #[arg(long, value_name = "C", default_value_t = DEFAULT_ENUMERATION_CAP)]
    cap: usize,
}

#[derive(Debug, Args)]
struct McMArgs {
    /// Path length; fractional values are floored
    #[arg(long, value_name = "N")]
    n: f64,
    /// Number of random functions to draw
    /// Number of random draws
    #[arg(long, value_name = "S")]
    samples: u64,
    /// Generator seed
    #[arg(long, value_name = "SEED", default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MomentMode {
    Formula,
    Brute,
    Both,
}

#[derive(Debug, Args)]
struct MomentsArgs {
    /// Rows for u = 1..=U
    #[arg(long, value_name = "U")]
    u_max: u64,
    /// Which columns to compute
    #[arg(long, value_enum, default_value = "both")]
    mode: MomentMode,
}

#[derive(Debug, Args)]
struct SubgaussianArgs {
    /// Weights are p^-SIG
    #[arg(long, value_name = "SIG", allow_negative_numbers = true)]
    sigma: f64,
    /// Number of leading primes in the sum
    #[arg(long, value_name = "K")]
    k: usize,
    /// Threshold
    #[arg(long, value_name = "G", allow_negative_numbers = true)]
    gamma: f64,
    /// Number of random draws
    #[arg(long, value_name = "S")]
    samples: u64,
    /// Generator seed
    #[arg(long, value_name = "SEED", default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SigmaPreset {
    /// 1/2 + 3 ln ln N / ln N
    HalfPlus,
    /// 1 + 3 ln ln N / ln N
    OnePlus,
}

#[derive(Debug, Args)]
struct TailArgs {
    /// Lower integration limit
    #[arg(long, value_name = "N")]
    n: u64,
    /// Abscissa rule, ignored when --sigma is given
    #[arg(
        long,
        value_enum,
        default_value = "half-plus",
        conflicts_with = "sigma"
    )]
    sigma_preset: SigmaPreset,
    /// Explicit abscissa
    #[arg(long, value_name = "SIG", allow_negative_numbers = true)]
    sigma: Option<f64>,
    /// Upper integration limit
    #[arg(long, value_name = "U")]
    truncation: f64,
    /// Number of random draws
    #[arg(long, value_name = "S")]
    samples: u64,
    /// Generator seed
    #[arg(long, value_name = "SEED", default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Signs {
    AllPlus,
    Random,
}

#[derive(Debug, Args)]
struct ZetaArgs {
    /// Real part of s
    #[arg(long, value_name = "SIG", allow_negative_numbers = true)]
    sigma: f64,
    /// Imaginary part of s
    #[arg(long, value_name = "T", allow_negative_numbers = true)]
    t: f64,
    /// Number of terms
    #[arg(long, value_name = "K")]
    cutoff: u64,
    /// Signs at the primes
    #[arg(long, value_enum, default_value = "all-plus")]
    signs: Signs,
    /// Generator seed, used with --signs random (stream 0)
    #[arg(long, value_name = "SEED", default_value_t = 0)]
    seed: u64,
}

/// Parses `args` (program name first) and runs the subcommand.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let rendered = e.render().to_string();
            let sink: &mut dyn Write = if code == 0 { stdout } else { stderr };
            let _ = write!(sink, "{rendered}");
            return code;
        }
    };
    match execute(&cli, stdout) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e:#}");
            1
        }
    }
}

fn execute(cli: &Cli, stdout: &mut dyn Write) -> anyhow::Result<()> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(w) = cli.workers {
        anyhow::ensure!(w >= 1, "invalid workers: must be at least 1");
        builder = builder.num_threads(w);
    }
    let pool = builder.build().context("building worker pool")?;
    let result = pool.install(|| produce(&cli.command, cli.format))?;

    match &cli.out {
        Some(path) => {
            let file =
                File::create(path).with_context(|| format!("creating {}", path.display()))?;
            let mut w = BufWriter::new(file);
            result.write(cli.format, &mut w)?;
            w.flush()?;
        }
        None => result.write(cli.format, stdout)?,
    }
    Ok(())
}

enum Output {
    /// A bare integer in CSV mode, a one-row table in JSON mode.
    Scalar(Echo, &'static str, u64),
    Table(Echo, Table),
}

impl Output {
    fn write(&self, format: Format, out: &mut dyn Write) -> io::Result<()> {
        match (self, format) {
            (Output::Table(echo, table), _) => table.write(echo, format, out),
            (Output::Scalar(_, _, value), Format::Csv) => writeln!(out, "{value}"),
            (Output::Scalar(echo, name, value), Format::Json) => {
                let mut t = Table::new(&[name]);
                t.push(vec![Cell::int(*value)]);
                t.write(echo, format, out)
            }
        }
    }
}

fn floor_length(param: &'static str, x: f64) -> anyhow::Result<u64> {
    if !(x >= 1.0) || !x.is_finite() {
        return Err(Error::Domain {
            param,
            reason: format!("{x} is below 1"),
        }
        .into());
    }
    Ok(x.floor() as u64)
}

fn primes_upto(limit: u64) -> anyhow::Result<PrimeTable> {
    Ok(sieve(limit.max(2))?)
}

/// A table holding at least the first `k` primes.
fn first_k_primes(k: usize) -> anyhow::Result<PrimeTable> {
    let kf = k.max(6) as f64;
    let bound = (kf * (kf.ln() + kf.ln().ln())).ceil() as u64 + 16;
    primes_upto(bound)
}

fn produce(command: &Command, format: Format) -> anyhow::Result<Output> {
    let fmt = match format {
        Format::Csv => "csv",
        Format::Json => "json",
    };
    match command {
        Command::Scan(a) => {
            let mut echo = Echo::new("scan");
            echo.push("limit", a.limit)
                .push("count_only", a.count_only)
                .push("format", fmt);
            if a.count_only {
                let report = scan(a.limit)?;
                return Ok(Output::Scalar(echo, "count", report.member_count() as u64));
            }
            let mut t = Table::new(&["p", "is_member", "min_prefix", "first_violation"]);
            for w in scan_walks(a.limit)? {
                t.push(vec![
                    Cell::int(w.p),
                    Cell::Bool(w.is_member),
                    Cell::int(w.min_prefix),
                    w.first_violation.map_or(Cell::Empty, Cell::int),
                ]);
            }
            Ok(Output::Table(echo, t))
        }
        Command::Nth(a) => {
            let mut echo = Echo::new("nth");
            echo.push("index", a.index)
                .push("max_limit", a.max_limit)
                .push("format", fmt);
            let p = nth_member(a.index, a.max_limit)?;
            Ok(Output::Scalar(echo, "p", p))
        }
        Command::ExactM(a) => {
            let n = floor_length("n", a.n)?;
            let mut echo = Echo::new("exact-m");
            echo.push("n", n).push("cap", a.cap).push("format", fmt);
            let r = exact_m_from_primes(n, &primes_upto(n)?, a.cap)?;
            let mut t = Table::new(&["n", "primes", "count", "total", "m"]);
            t.push(vec![
                Cell::int(r.n_max),
                Cell::int(r.primes as u64),
                Cell::int(r.dyck_count),
                Cell::int(r.total),
                Cell::Real(r.m_f64()),
            ]);
            Ok(Output::Table(echo, t))
        }
        Command::Table1 => {
            let mut echo = Echo::new("table1");
            echo.push("format", fmt);
            let mut t = Table::new(&["n", "p_n", "count", "m", "m_ln_p"]);
            for row in table1(&primes_upto(100)?)? {
                t.push(vec![
                    Cell::int(row.n as u64),
                    Cell::int(row.p_n),
                    Cell::int(row.count.dyck_count),
                    Cell::Fixed(row.count.m_f64(), 6),
                    Cell::Fixed(row.m_ln_p, 3),
                ]);
            }
            Ok(Output::Table(echo, t))
        }
        Command::McM(a) => {
            let n = floor_length("n", a.n)?;
            let mut echo = Echo::new("mc-m");
            echo.push("n", n)
                .push("samples", a.samples)
                .push("seed", a.seed)
                .push("format", fmt);
            let e = mc_m(n, a.samples, a.seed, &primes_upto(n)?)?;
            let mut t = Table::new(&[
                "n_max",
                "samples",
                "successes",
                "estimate",
                "ci_low",
                "ci_high",
                "seed",
            ]);
            t.push(vec![
                Cell::int(e.n_max),
                Cell::int(e.samples),
                Cell::int(e.successes),
                Cell::Real(e.estimate),
                Cell::Real(e.ci_low),
                Cell::Real(e.ci_high),
                Cell::int(e.seed),
            ]);
            Ok(Output::Table(echo, t))
        }
        Command::Moments(a) => {
            let mode = match a.mode {
                MomentMode::Formula => "formula",
                MomentMode::Brute => "brute",
                MomentMode::Both => "both",
            };
            let mut echo = Echo::new("moments");
            echo.push("u_max", a.u_max)
                .push("mode", mode)
                .push("format", fmt);
            if a.u_max == 0 {
                return Err(Error::Domain {
                    param: "u-max",
                    reason: "must be at least 1".into(),
                }
                .into());
            }
            let pt = primes_upto(a.u_max)?;
            let brute = a.mode != MomentMode::Formula;
            let formula = a.mode != MomentMode::Brute;
            let kmt = if brute {
                let required = pt.pi(a.u_max);
                if required > BRUTE_FORCE_CAP {
                    return Err(Error::EnumerationCap {
                        required,
                        cap: BRUTE_FORCE_CAP,
                    }
                    .into());
                }
                Some(kernel_masks(a.u_max, &pt)?)
            } else {
                None
            };
            let mut t = Table::new(&["u", "formula", "bruteforce", "mc"]);
            for u in 1..=a.u_max {
                let f = if formula {
                    Cell::int(second_moment_formula(u, &pt)?)
                } else {
                    Cell::Empty
                };
                let b = match &kmt {
                    Some(kmt) => {
                        let r = second_moment_bruteforce(u, kmt)?;
                        if r.is_integer() {
                            Cell::int(r.to_integer())
                        } else {
                            Cell::Text(format!("{}/{}", r.numer(), r.denom()))
                        }
                    }
                    None => Cell::Empty,
                };
                t.push(vec![Cell::int(u), f, b, Cell::Empty]);
            }
            Ok(Output::Table(echo, t))
        }
        Command::Subgaussian(a) => {
            let mut echo = Echo::new("subgaussian");
            echo.push("sigma", a.sigma)
                .push("k", a.k)
                .push("gamma", a.gamma)
                .push("samples", a.samples)
                .push("seed", a.seed)
                .push("format", fmt);
            let r = subgaussian_check(
                a.sigma,
                a.k,
                a.gamma,
                a.samples,
                a.seed,
                &first_k_primes(a.k)?,
            )?;
            let mut t = Table::new(&[
                "sigma",
                "k",
                "gamma",
                "s",
                "samples",
                "empirical_tail",
                "stderr",
                "bound",
                "seed",
            ]);
            t.push(vec![
                Cell::Real(r.sigma),
                Cell::int(r.k_primes as u64),
                Cell::Real(r.gamma),
                Cell::Real(r.s),
                Cell::int(r.samples),
                Cell::Real(r.empirical_tail),
                Cell::Real(r.stderr),
                Cell::Real(r.bound),
                Cell::int(r.seed),
            ]);
            Ok(Output::Table(echo, t))
        }
        Command::Tail(a) => {
            let (rule, label) = match (a.sigma, a.sigma_preset) {
                (Some(s), _) => (SigmaRule::Fixed(s), "explicit"),
                (None, SigmaPreset::HalfPlus) => (SigmaRule::HalfPlus, "half-plus"),
                (None, SigmaPreset::OnePlus) => (SigmaRule::OnePlus, "one-plus"),
            };
            if a.n < 3 && !matches!(rule, SigmaRule::Fixed(_)) {
                return Err(Error::Domain {
                    param: "n",
                    reason: format!("{} is below 3, where the sigma presets are undefined", a.n),
                }
                .into());
            }
            let sigma = rule.sigma(a.n);
            let mut echo = Echo::new("tail");
            echo.push("n", a.n)
                .push("sigma_rule", label)
                .push("sigma", sigma)
                .push("truncation", a.truncation)
                .push("samples", a.samples)
                .push("seed", a.seed)
                .push("format", fmt);
            let top = if a.truncation.is_finite() && a.truncation >= 2.0 {
                a.truncation.floor() as u64
            } else {
                2
            };
            let r = tail_integral(
                a.n,
                sigma,
                a.truncation,
                a.samples,
                a.seed,
                &primes_upto(top)?,
            )?;
            let mut t = Table::new(&["N", "sigma", "U", "samples", "mean_I", "stderr", "seed"]);
            t.push(vec![
                Cell::int(r.n_lo),
                Cell::Real(r.sigma),
                Cell::Real(r.truncation),
                Cell::int(r.samples),
                Cell::Real(r.mean_i),
                Cell::Real(r.stderr),
                Cell::int(r.seed),
            ]);
            Ok(Output::Table(echo, t))
        }
        Command::Zeta(a) => {
            let signs = match a.signs {
                Signs::AllPlus => "all-plus",
                Signs::Random => "random",
            };
            let mut echo = Echo::new("zeta");
            echo.push("sigma", a.sigma)
                .push("t", a.t)
                .push("cutoff", a.cutoff)
                .push("signs", signs)
                .push("seed", json!(a.seed))
                .push("format", fmt);
            if a.cutoff == 0 {
                return Err(Error::Domain {
                    param: "cutoff",
                    reason: "must be at least 1".into(),
                }
                .into());
            }
            let steps = match a.signs {
                Signs::AllPlus => vec![1i8; a.cutoff as usize],
                Signs::Random => {
                    let pt = primes_upto(a.cutoff)?;
                    let eval = StepEvaluator::new(a.cutoff, &pt)?;
                    sample_assignment(a.cutoff, a.seed, 0, &pt)?.steps(&eval)?
                }
            };
            let z = zeta_truncated(&steps, a.sigma, a.t, a.cutoff)?;
            let mut t = Table::new(&["sigma", "t", "cutoff", "re", "im", "signs", "seed"]);
            t.push(vec![
                Cell::Real(z.sigma),
                Cell::Real(z.t),
                Cell::int(z.cutoff),
                Cell::Real(z.value.re),
                Cell::Real(z.value.im),
                Cell::Text(signs.into()),
                Cell::int(a.seed),
            ]);
            Ok(Output::Table(echo, t))
        }
    }
}
