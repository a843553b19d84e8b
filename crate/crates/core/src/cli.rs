//! Batch front end behind the `chshq` binary.
//!
//! Exit codes: 0 ok, 2 bad input, 3 construction unsupported, 4 malformed
//! document, 5 bound violation, 6 oracle cap refusal.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::audit::{audit_with_census, k_census, k_census_csv};
use crate::construction::{build_strategy, derive_params, ConstructionReport};
use crate::error::Error;
use crate::field::{is_prime, PrimeModulus};
use crate::fraction::{self, Fraction};
use crate::game::{classical_guarantee, evaluate, quantum_upper_bound, trivial_strategy, ClassicalGuarantee, DeterministicStrategy};
use crate::oracle::{optimal_classical_value, DEFAULT_CAP};

pub const EXIT_OK: i32 = 0;
pub const EXIT_BAD_INPUT: i32 = 2;
pub const EXIT_UNSUPPORTED: i32 = 3;
pub const EXIT_MALFORMED: i32 = 4;
pub const EXIT_VIOLATION: i32 = 5;
pub const EXIT_CAP: i32 = 6;

#[derive(Debug, Parser)]
#[command(name = "chshq", version, about = "Classical strategies for CHSH_q games over prime fields")]
pub struct RunConfig {
    /// Worker threads; defaults to available parallelism. `1` gives a serial run.
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    /// Per-k rows; `audit` only.
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Builtin {
    Explicit,
    Trivial,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build the explicit strategy for a prime and report on it.
    Construct {
        #[arg(long = "p", visible_alias = "q")]
        p: u64,
        /// Strategy document path; the report goes next to it as `<stem>.report.json`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exhaustively evaluate a strategy document or a builtin strategy.
    Evaluate {
        #[arg(long = "p", visible_alias = "q")]
        p: Option<u64>,
        #[arg(long, value_enum, conflicts_with = "strategy")]
        builtin: Option<Builtin>,
        #[arg(long)]
        strategy: Option<PathBuf>,
    },
    /// Duplicate-slope census and bound comparison.
    Audit {
        #[arg(long = "p", visible_alias = "q")]
        p: u64,
    },
    /// Exact optimal classical value by brute force.
    Oracle {
        #[arg(long = "q", visible_alias = "p")]
        q: u64,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: u64,
    },
    /// Quantum bound, classical guarantee and trivial value side by side.
    Bounds {
        #[arg(long = "q", visible_alias = "p")]
        q: u64,
    },
}

#[derive(Debug, Serialize)]
struct BoundsTable {
    q: u64,
    prime: bool,
    /// "exact" for primes, "formula value only" otherwise.
    note: &'static str,
    quantum_upper_bound: f64,
    classical_guarantee: ClassicalGuarantee,
    trivial_win_count: u64,
    #[serde(with = "fraction")]
    trivial_value: Fraction,
}

struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NotPrime(_) | Error::ModulusOutOfRange(_) => EXIT_BAD_INPUT,
            Error::ConstructionUnsupported { .. } => EXIT_UNSUPPORTED,
            Error::OracleCap { .. } => EXIT_CAP,
            Error::Document(_) | Error::TableLength { .. } | Error::NonCanonical { .. } => EXIT_MALFORMED,
            _ => EXIT_BAD_INPUT,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn fail(code: i32, message: impl Into<String>) -> Failure {
    Failure {
        code,
        message: message.into(),
    }
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    std::fs::write(path, contents).map_err(|e| fail(EXIT_BAD_INPUT, format!("{}: {e}", path.display())))
}

/// Runs one subcommand, writing the document to `out` and diagnostics to `err`.
pub fn run(config: &RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = config.threads {
        pool = pool.num_threads(n);
    }
    let pool = match pool.build() {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_BAD_INPUT;
        }
    };
    match pool.install(|| dispatch(config)) {
        Ok((doc, code)) => {
            if out.write_all(doc.as_bytes()).is_err() {
                return EXIT_BAD_INPUT;
            }
            code
        }
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn dispatch(config: &RunConfig) -> Result<(String, i32), Failure> {
    if config.format == Format::Csv && !matches!(config.command, Command::Audit { .. }) {
        return Err(fail(EXIT_BAD_INPUT, "--format csv is only available for audit"));
    }
    match &config.command {
        Command::Construct { p, out } => construct(*p, out.as_deref()),
        Command::Evaluate { p, builtin, strategy } => evaluate_cmd(*p, *builtin, strategy.as_deref()),
        Command::Audit { p } => audit_cmd(*p, config.format),
        Command::Oracle { q, cap } => {
            let q = PrimeModulus::new(*q)?;
            Ok((json(&optimal_classical_value(q, *cap)?), EXIT_OK))
        }
        Command::Bounds { q } => bounds(*q),
    }
}

fn construct(p: u64, out: Option<&Path>) -> Result<(String, i32), Failure> {
    let p = PrimeModulus::new(p)?;
    let (strategy, report) = build_strategy(p)?;
    let report_json = json(&report);
    if let Some(path) = out {
        write_file(path, &json(&strategy))?;
        write_file(&path.with_extension("report.json"), &report_json)?;
    }
    Ok((report_json, EXIT_OK))
}

fn evaluate_cmd(p: Option<u64>, builtin: Option<Builtin>, path: Option<&Path>) -> Result<(String, i32), Failure> {
    let strategy = match (builtin, path) {
        (_, Some(path)) => {
            let text = std::fs::read_to_string(path).map_err(|e| fail(EXIT_MALFORMED, format!("{}: {e}", path.display())))?;
            let s = DeterministicStrategy::from_json(&text)?;
            if let Some(p) = p {
                if p != s.modulus().get() {
                    return Err(fail(
                        EXIT_MALFORMED,
                        format!("document has q = {}, expected {p}", s.modulus()),
                    ));
                }
            }
            s
        }
        (Some(b), None) => {
            let p = p.ok_or_else(|| fail(EXIT_BAD_INPUT, "--p is required with --builtin"))?;
            let p = PrimeModulus::new(p)?;
            match b {
                Builtin::Trivial => trivial_strategy(p),
                Builtin::Explicit => crate::construction::construct(p)?.strategy,
            }
        }
        (None, None) => return Err(fail(EXIT_BAD_INPUT, "give --strategy <path> or --builtin <name>")),
    };
    Ok((json(&evaluate(&strategy)), EXIT_OK))
}

fn audit_cmd(p: u64, format: Format) -> Result<(String, i32), Failure> {
    let p = PrimeModulus::new(p)?;
    let params = derive_params(p)?;
    let census = k_census(&params);
    let report = audit_with_census(&params, &census);
    let code = if report.violation() { EXIT_VIOLATION } else { EXIT_OK };
    let doc = match format {
        Format::Json => json(&report),
        Format::Csv => k_census_csv(&census),
    };
    Ok((doc, code))
}

fn bounds(q: u64) -> Result<(String, i32), Failure> {
    if q < 2 {
        return Err(fail(EXIT_BAD_INPUT, format!("q = {q} must be at least 2")));
    }
    let prime = is_prime(q);
    let trivial = 2 * q as u128 - 1;
    let table = BoundsTable {
        q,
        prime,
        note: if prime { "exact" } else { "formula value only" },
        quantum_upper_bound: quantum_upper_bound(q),
        classical_guarantee: classical_guarantee(q),
        trivial_win_count: trivial as u64,
        trivial_value: Fraction::new(trivial, q as u128 * q as u128),
    };
    Ok((json(&table), EXIT_OK))
}

/// Reads back a report written by `construct --out`.
pub fn read_construction_report(path: &Path) -> Result<ConstructionReport, Error> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Document(e.to_string()))?;
    serde_json::from_str(&text).map_err(|e| Error::Document(e.to_string()))
}
