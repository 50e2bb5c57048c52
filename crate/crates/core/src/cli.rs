//! Command-line front end. `run` never panics on bad input; it maps outcomes
//! to exit codes: 0 when every executed verdict passes, 1 when any fails,
//! 2 on usage, configuration or hypothesis errors.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, Write};
use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use crate::bernoulli::{irregular_pairs, BernoulliCache, DEFAULT_INDEX_CEILING};
use crate::congruences::{self, verify, CaseSpec, TierMode, Verdict};
use crate::error::{Error, Result};
use crate::exact::{format_rational, PrimePower, Valuation};
use crate::harmonic::{harmonic, harmonic_mod, HarmonicSpec};
use crate::primes::classify;
use crate::report::{emit, Format, ReportRecord, Status};
use crate::scan::{scan, ScanJob};
use crate::Context;

pub const CACHE_ENV: &str = "HCL_CACHE";
pub const DEFAULT_CACHE: &str = "bernoulli.cache";

#[derive(Debug, Parser)]
#[command(
    name = "hcl",
    version,
    about = "Exact verification of harmonic-number congruences"
)]
struct Cli {
    /// Bernoulli cache file [env: HCL_CACHE] [default: ./bernoulli.cache]
    #[arg(long, global = true)]
    cache: Option<PathBuf>,

    /// Largest Bernoulli index any command may compute
    #[arg(long, global = true, default_value_t = DEFAULT_INDEX_CEILING)]
    bernoulli_ceiling: u64,

    /// Report format: json or csv
    #[arg(long, global = true, default_value = "json", value_parser = parse_format)]
    format: Format,

    /// Write output here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print B_n, or B_0..B_n with --all
    Bernoulli {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        all: bool,
    },
    /// Print H^(order)_n exactly, and modulo p^e when --p is given
    Harmonic {
        #[arg(long, default_value_t = 1)]
        order: u32,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        p: Option<u64>,
        #[arg(long, default_value_t = 1)]
        e: u32,
    },
    /// Verify one case and print its report record
    Verify {
        id: String,
        #[arg(long)]
        p: u64,
        #[command(flatten)]
        params: PointParams,
        #[arg(long, default_value = "auto", value_parser = parse_tier)]
        tier: TierMode,
        /// Also print the tier ladder to stderr
        #[arg(long)]
        explain: bool,
    },
    /// Verify every case of a parameter grid; ranges are written `lo..hi` or `v`
    Scan {
        id: String,
        #[arg(long)]
        p_min: u64,
        #[arg(long)]
        p_max: u64,
        #[command(flatten)]
        params: RangeParams,
        #[arg(long, default_value = "auto", value_parser = parse_tier)]
        tier: TierMode,
    },
    /// List irregular pairs (p, 2k) for primes in a range
    IrregularPairs {
        #[arg(long, default_value_t = 3)]
        p_min: u64,
        #[arg(long)]
        p_max: u64,
    },
    /// Fermat quotient, Wieferich and Mersenne status of a prime
    ClassifyPrime {
        #[arg(long)]
        p: u64,
    },
    /// Replay the gold vectors and the sharpness counterexample
    Selftest,
}

#[derive(Debug, Args)]
struct PointParams {
    #[arg(long)]
    n: Option<u64>,
    #[arg(long)]
    k: Option<u64>,
    #[arg(long)]
    i: Option<u64>,
    #[arg(long)]
    h: Option<u64>,
    #[arg(long)]
    j_terms: Option<u64>,
}

#[derive(Debug, Args)]
struct RangeParams {
    #[arg(long, value_parser = parse_range)]
    n: Option<RangeInclusive<u64>>,
    #[arg(long, value_parser = parse_range)]
    k: Option<RangeInclusive<u64>>,
    #[arg(long, value_parser = parse_range)]
    i: Option<RangeInclusive<u64>>,
    #[arg(long, value_parser = parse_range)]
    h: Option<RangeInclusive<u64>>,
    #[arg(long, value_parser = parse_range)]
    j_terms: Option<RangeInclusive<u64>>,
}

fn parse_format(s: &str) -> std::result::Result<Format, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_tier(s: &str) -> std::result::Result<TierMode, String> {
    if s == "auto" {
        return Ok(TierMode::Auto);
    }
    s.parse()
        .map(TierMode::Fixed)
        .map_err(|_| format!("tier must be `auto` or an integer, got {s:?}"))
}

fn parse_range(s: &str) -> std::result::Result<RangeInclusive<u64>, String> {
    let bad = || format!("expected `lo..hi` or a single integer, got {s:?}");
    match s.split_once("..") {
        Some((lo, hi)) => {
            let lo: u64 = lo.parse().map_err(|_| bad())?;
            let hi: u64 = hi.trim_start_matches('=').parse().map_err(|_| bad())?;
            Ok(lo..=hi)
        }
        None => s.parse().map(|v| v..=v).map_err(|_| bad()),
    }
}

/// Cache file: `--cache`, then `$HCL_CACHE`, then `./bernoulli.cache`.
pub fn resolve_cache_path(flag: Option<PathBuf>, env: Option<OsString>) -> PathBuf {
    flag.or_else(|| env.filter(|v| !v.is_empty()).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(DEFAULT_CACHE))
}

/// Entry point used by the binary.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = io::stdout();
    let stderr = io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}

/// [`run`] with explicit output streams.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // --help and --version come through here too
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = err.write_all(text.as_bytes());
                return 2;
            }
            let _ = out.write_all(text.as_bytes());
            return 0;
        }
    };
    match execute(cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

fn execute(cli: Cli, stdout: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let path = resolve_cache_path(cli.cache.clone(), std::env::var_os(CACHE_ENV));
    let ctx = Context::with_cache(BernoulliCache::open(&path, cli.bernoulli_ceiling)?);
    let mut file;
    let out: &mut dyn Write = match &cli.out {
        Some(p) => {
            file = File::create(p)?;
            &mut file
        }
        None => stdout,
    };
    let code = dispatch(&cli, &ctx, out, err);
    // keep whatever was computed, even when the command itself failed
    ctx.bernoulli.persist()?;
    out.flush()?;
    code
}

fn dispatch(cli: &Cli, ctx: &Context, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    match &cli.command {
        Command::Bernoulli { n, all } => {
            let lo = if *all { 0 } else { *n };
            let values = ctx.bernoulli.range(*n)?;
            for (i, v) in values.iter().enumerate().skip(lo as usize) {
                writeln!(out, "{i} {}", format_rational(v))?;
            }
            Ok(0)
        }
        Command::Harmonic { order, n, p, e } => {
            let spec = HarmonicSpec::new(*order, *n)?;
            writeln!(out, "{}", format_rational(&harmonic(spec)))?;
            if let Some(p) = p {
                let m = PrimePower::new(*p, *e)?;
                writeln!(out, "{} (mod {p}^{e})", harmonic_mod(spec, m)?)?;
            }
            Ok(0)
        }
        Command::Verify {
            id,
            p,
            params,
            tier,
            explain,
        } => {
            let mut case = CaseSpec::new(id.parse()?, *p);
            for (name, value) in [
                ("n", params.n),
                ("k", params.k),
                ("i", params.i),
                ("h", params.h),
                ("j_terms", params.j_terms),
            ] {
                if let Some(v) = value {
                    case = case.with(name, v);
                }
            }
            let start = Instant::now();
            let verdict = verify(&case, *tier, ctx)?;
            let record = ReportRecord::from_verdict(&verdict, start.elapsed().as_millis() as u64);
            if *explain {
                explain_ladder(&verdict, err)?;
            }
            out.write_all(&emit(&[record], cli.format))?;
            Ok(if verdict.pass { 0 } else { 1 })
        }
        Command::Scan {
            id,
            p_min,
            p_max,
            params,
            tier,
        } => {
            let mut job = ScanJob::new(id.parse()?, *p_min..=*p_max);
            job.tier = *tier;
            for (name, range) in [
                ("n", &params.n),
                ("k", &params.k),
                ("i", &params.i),
                ("h", &params.h),
                ("j_terms", &params.j_terms),
            ] {
                if let Some(r) = range {
                    job = job.param(name, r.clone());
                }
            }
            let records = scan(&job, ctx)?;
            out.write_all(&emit(&records, cli.format))?;
            let failed = records.iter().any(|r| r.status == Status::Fail);
            Ok(if failed { 1 } else { 0 })
        }
        Command::IrregularPairs { p_min, p_max } => {
            let pairs = irregular_pairs(*p_min, *p_max, &ctx.bernoulli)?;
            match cli.format {
                Format::Json => {
                    for (p, idx) in pairs {
                        writeln!(out, "{}", serde_json::json!({ "p": p, "index": idx }))?;
                    }
                }
                Format::Csv => {
                    writeln!(out, "p,index")?;
                    for (p, idx) in pairs {
                        writeln!(out, "{p},{idx}")?;
                    }
                }
            }
            Ok(0)
        }
        Command::ClassifyPrime { p } => {
            let c = classify(*p)?;
            match cli.format {
                Format::Json => writeln!(
                    out,
                    "{}",
                    serde_json::json!({
                        "p": c.p,
                        "is_wieferich": c.is_wieferich,
                        "is_mersenne": c.is_mersenne,
                        "fermat_quotient": c.fermat_quotient.to_string(),
                    })
                )?,
                Format::Csv => {
                    writeln!(out, "p,is_wieferich,is_mersenne,fermat_quotient")?;
                    writeln!(
                        out,
                        "{},{},{},{}",
                        c.p, c.is_wieferich, c.is_mersenne, c.fermat_quotient
                    )?;
                }
            }
            Ok(0)
        }
        Command::Selftest => selftest(ctx, out),
    }
}

fn explain_ladder(v: &Verdict, err: &mut dyn Write) -> Result<()> {
    for t in &v.ladder {
        let reason = t
            .reason
            .as_deref()
            .map(|r| format!(" ({r})"))
            .unwrap_or_default();
        writeln!(
            err,
            "m={} condition={}{reason} exponent={} pass={}",
            t.m, t.condition, t.exponent, t.pass
        )?;
    }
    Ok(())
}

/// One replayed vector: a label, the verdict, and what it should look like.
struct Gold {
    label: &'static str,
    verdict: Verdict,
    ok: bool,
}

fn gold_vectors(ctx: &Context) -> Result<Vec<Gold>> {
    let numer = |v: &Verdict| v.lhs.numer().to_string();
    let mut out = Vec::new();

    let v = congruences::verify_thm_ee10bis(37, 0, 0, TierMode::Auto, ctx)?;
    let ok = numer(&v) == "1422091936194747472864459922257"
        && v.achieved_valuation == Valuation::Finite(5)
        && v.pass;
    out.push(Gold {
        label: "ee10bis p=37 n=0 i=0: numerator divisible by 37^5",
        verdict: v,
        ok,
    });

    let v = congruences::verify_thm_eecj(37, 1, 1, TierMode::Auto, ctx)?;
    let ok = numer(&v) == "9356942544006649495921"
        && v.achieved_valuation == Valuation::Finite(4)
        && v.pass;
    out.push(Gold {
        label: "eecj p=37 n=1 i=1: numerator divisible by 37^4",
        verdict: v,
        ok,
    });

    let v = congruences::verify_thm_eecj(31, 1, 1, TierMode::Auto, ctx)?;
    let ok = numer(&v) == "1804176116127398723"
        && v.achieved_valuation == Valuation::Finite(4)
        && v.pass;
    out.push(Gold {
        label: "eecj p=31 n=1 i=1: numerator divisible by 31^4",
        verdict: v,
        ok,
    });

    let v = congruences::verify_thm_eecj(5, 1, 2, TierMode::Auto, ctx)?;
    let ok = format_rational(&v.lhs) == "5625/32" && v.pass;
    out.push(Gold {
        label: "eecj p=5 n=1 i=2: lhs = 3^2 5^4 / 2^5",
        verdict: v,
        ok,
    });

    let v = congruences::verify_thm_ee20(3, 5, ctx)?;
    let twice = crate::exact::int(2) * &v.lhs;
    let ok = !v.pass
        && v.achieved_valuation == Valuation::Finite(4)
        && format_rational(&twice) == "4293/80";
    out.push(Gold {
        label: "ee20 p=3 n=5: fails with valuation 4",
        verdict: v,
        ok,
    });

    Ok(out)
}

fn selftest(ctx: &Context, out: &mut dyn Write) -> Result<i32> {
    let mut all = true;
    for g in gold_vectors(ctx)? {
        all &= g.ok;
        writeln!(
            out,
            "{} {} [lhs={} v={}]",
            if g.ok { "ok  " } else { "FAIL" },
            g.label,
            format_rational(&g.verdict.lhs),
            g.verdict.achieved_valuation
        )?;
    }
    Ok(if all { 0 } else { 1 })
}
