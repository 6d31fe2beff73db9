//! Command-line front end: argument parsing, dispatch and output.
//!
//! Exit codes: 0 on success, 1 when a sieve verdict is `partial` (or a
//! reproduction check fails), 2 on invalid arguments.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde::Serialize;

use lps_core::bounds::combined_bound;
use lps_core::intarith::is_prime;
use lps_core::sieve::{scan_powers, sieve_run, SieveConfig, Verdict};
use lps_core::SequenceParams;

pub mod args;
pub mod reports;
pub mod text;

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARTIAL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Largest `--q-max` accepted.
const Q_MAX_LIMIT: u64 = 1 << 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "lps",
    version,
    about = "Perfect powers in Lucas sequences u_n = b u_{n-1} + c u_{n-2}"
)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Seq {
    /// Coefficient b in u_n = b u_{n-1} + c u_{n-2}
    #[arg(short = 'b', allow_negative_numbers = true)]
    b: i64,
    /// Coefficient c in u_n = b u_{n-1} + c u_{n-2}
    #[arg(short = 'c', allow_negative_numbers = true)]
    c: i64,
}

impl Seq {
    fn params(&self) -> Result<SequenceParams, Failure> {
        SequenceParams::new(self.b, self.c).map_err(|e| Failure::usage(e.to_string()))
    }
}

#[derive(Debug, Args)]
struct Tuning {
    /// Largest residue set a sieve step may produce.
    #[arg(long)]
    explosion_cap: Option<usize>,
    /// Largest index checked by exact computation.
    #[arg(long)]
    exact_check_limit: Option<u64>,
    /// Most sieve primes consumed.
    #[arg(long)]
    prime_cap: Option<usize>,
    /// Projected residue-set size up to which growing steps are taken.
    #[arg(long)]
    working_set: Option<usize>,
    /// Largest sieve prime q.
    #[arg(long)]
    q_max: Option<u64>,
    /// Most rounds of the smooth-modulus schedule.
    #[arg(long)]
    max_rounds: Option<usize>,
    /// Starting smooth modulus, e.g. `2^4,3^2,5`.
    #[arg(long)]
    initial_m: Option<String>,
    /// Multipliers of the smooth modulus, one per round, e.g. `2,3,5,7`.
    #[arg(long)]
    schedule: Option<String>,
    /// LPSV1 residue-class cache file.
    #[arg(long)]
    cache: Option<PathBuf>,
}

impl Tuning {
    fn config(&self) -> Result<SieveConfig, Failure> {
        let mut cfg = SieveConfig::default();
        if let Some(v) = self.explosion_cap {
            cfg.explosion_cap = v;
        }
        if let Some(v) = self.exact_check_limit {
            cfg.exact_check_limit = v;
        }
        if let Some(v) = self.prime_cap {
            cfg.prime_cap = v;
        }
        if let Some(v) = self.working_set {
            cfg.working_set = v;
        }
        if let Some(v) = self.q_max {
            if !(3..=Q_MAX_LIMIT).contains(&v) {
                return Err(Failure::usage(format!("--q-max must lie in [3, 2^32], got {v}")));
            }
            cfg.q_max = v;
        }
        if let Some(v) = self.max_rounds {
            cfg.max_rounds = v;
        }
        if let Some(v) = &self.initial_m {
            cfg.initial_m = args::prime_powers(v).map_err(|e| Failure::usage(format!("--initial-m: {e}")))?;
        }
        if let Some(v) = &self.schedule {
            cfg.schedule = Some(args::prime_list(v).map_err(|e| Failure::usage(format!("--schedule: {e}")))?);
        }
        cfg.cache_path = self.cache.clone();
        Ok(cfg)
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List u_n = y^p with |y| >= 2, p prime, 2 <= n <= n-max.
    Scan {
        #[command(flatten)]
        seq: Seq,
        #[arg(long, default_value_t = 1000)]
        n_max: u64,
    },
    /// Sieve u_n = y^p for all n <= B with a growing smooth modulus.
    Sieve {
        #[command(flatten)]
        seq: Seq,
        /// Prime exponent.
        #[arg(short = 'p')]
        p: u64,
        /// Index bound, decimal or `<m>e<k>`.
        #[arg(short = 'B', value_parser = args::big)]
        bound: BigUint,
        #[command(flatten)]
        tuning: Tuning,
    },
    /// Conductor, psi, and the AV and Ell exponent bounds.
    Bound {
        #[command(flatten)]
        seq: Seq,
    },
    /// Frey curve of a hypothetical solution at index n >= 7.
    Frey {
        #[command(flatten)]
        seq: Seq,
        #[arg(short = 'n')]
        n: u64,
    },
    /// Genus and newform dimension of X_0(N).
    Dims {
        /// Level N.
        #[arg(short = 'N', long = "level")]
        level: u64,
        /// Weight used for the Sturm bound.
        #[arg(short = 'k', long, default_value_t = 2)]
        weight: u64,
    },
    /// Sequences with b^2 + 4c = 1 whose level rad(c) has no newforms.
    Search {
        /// Largest b searched.
        #[arg(long, default_value_t = 10_000)]
        bound: u64,
    },
    /// Thue form of degree p and, with -B, the index bound it gives.
    Thue {
        #[command(flatten)]
        seq: Seq,
        #[arg(short = 'p')]
        p: u32,
        /// Bound on max(|X|, |Y|), decimal or `<m>e<k>`.
        #[arg(short = 'B', value_parser = args::big)]
        bound: Option<BigUint>,
    },
    /// Rerun the known scans, the search and the desk-scale sieve grid.
    Repro {
        /// Sieve index bound.
        #[arg(short = 'B', value_parser = args::big, default_value = "1e50")]
        bound: BigUint,
        #[command(flatten)]
        tuning: Tuning,
    },
}

/// A failure reported to the user, with its exit code.
#[derive(Debug)]
struct Failure {
    code: i32,
    kind: &'static str,
    message: String,
}

impl Failure {
    fn usage(message: String) -> Self {
        Self {
            code: EXIT_USAGE,
            kind: "invalidArgument",
            message,
        }
    }
}

struct Output {
    value: serde_json::Value,
    code: i32,
}

fn output<T: Serialize>(report: &T, code: i32) -> Output {
    Output {
        value: serde_json::to_value(report).expect("reports serialize"),
        code,
    }
}

fn require_prime(p: u64) -> Result<(), Failure> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Failure::usage(format!("p = {p} is not prime")))
    }
}

fn execute(command: Command) -> Result<Output, Failure> {
    match command {
        Command::Scan { seq, n_max } => Ok(output(&scan_powers(&seq.params()?, n_max), EXIT_OK)),
        Command::Sieve { seq, p, bound, tuning } => {
            let params = seq.params()?;
            require_prime(p)?;
            let report = sieve_run(&params, p, &bound, &tuning.config()?);
            let code = if report.verdict == Verdict::Complete {
                EXIT_OK
            } else {
                EXIT_PARTIAL
            };
            Ok(output(&report, code))
        }
        Command::Bound { seq } => Ok(output(&combined_bound(&seq.params()?), EXIT_OK)),
        Command::Frey { seq, n } => {
            let report = reports::frey(seq.params()?, n).map_err(|e| Failure::usage(e.to_string()))?;
            Ok(output(&report, EXIT_OK))
        }
        Command::Dims { level, weight } => {
            if level == 0 || weight == 0 {
                return Err(Failure::usage("level and weight must be positive".into()));
            }
            Ok(output(&reports::dims(level, weight), EXIT_OK))
        }
        Command::Search { bound } => {
            if bound < 17 {
                return Err(Failure::usage(format!("--bound must be at least 17, got {bound}")));
            }
            Ok(output(&reports::search(bound), EXIT_OK))
        }
        Command::Thue { seq, p, bound } => {
            let params = seq.params()?;
            if p < 3 || !is_prime(p as u64) {
                return Err(Failure::usage(format!("p = {p} must be an odd prime")));
            }
            Ok(output(&reports::thue(&params, p, bound), EXIT_OK))
        }
        Command::Repro { bound, tuning } => {
            let report = reports::repro(&bound, &tuning.config()?);
            let code = if report.all_match { EXIT_OK } else { EXIT_PARTIAL };
            Ok(output(&report, code))
        }
    }
}

/// Sizes the global worker pool from `LPS_THREADS` when set.
fn configure_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var("LPS_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| Failure::usage(format!("LPS_THREADS must be a positive integer, got `{raw}`")))?;
    // a pool already built by an earlier call in this process is kept
    let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    Ok(())
}

fn report_failure(f: &Failure, format: Format, err: &mut impl Write) {
    let _ = match format {
        Format::Json => writeln!(
            err,
            "{}",
            serde_json::json!({ "error": { "kind": f.kind, "message": f.message } })
        ),
        Format::Text => writeln!(err, "error: {}", f.message),
    };
}

/// Parses `argv` (program name first), runs the command and writes the
/// report to `out`; returns the exit code.
pub fn run<I, T>(argv: I, out: &mut impl Write, err: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    let format = cli.format;
    let result = configure_threads().and_then(|()| execute(cli.command));
    match result {
        Ok(o) => {
            let written = match format {
                Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&o.value).expect("valid JSON")),
                Format::Text => write!(out, "{}", text::render(&o.value)),
            };
            if written.is_err() {
                return EXIT_PARTIAL;
            }
            o.code
        }
        Err(f) => {
            report_failure(&f, format, err);
            f.code
        }
    }
}
