//! `pwmap`: exact analysis of piecewise linear interval maps from JSON specs.

mod oracle;
mod report;
mod text;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Value};

use pwmap::dimension::conjugacy_compare;
use pwmap::map_model::{build_map, MapSpec, PLMap};
use pwmap::number::{rat, Session};
use pwmap::Error;

use report::Settings;

#[derive(Parser)]
#[command(name = "pwmap", version, about = "Exact invariants of piecewise linear interval maps")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum Format {
    Json,
    Text,
}

#[derive(Args, Clone)]
struct Common {
    /// Orbit and equivalence bound.
    #[arg(long, default_value_t = 256)]
    bound: usize,
    /// Tolerance for iterative methods: a rational such as 1/1000000 or 1e-6.
    #[arg(long, default_value = "1/1000000")]
    tol: String,
    #[arg(long, default_value_t = 200)]
    maxiter: usize,
    /// Treat the scale factor as transcendental in state-range membership.
    #[arg(long)]
    generic_s: bool,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Wrap the report in an envelope with wall-clock timing.
    #[arg(long)]
    timing: bool,
}

#[derive(Args, Clone)]
struct MapArg {
    /// Map specification file (JSON).
    #[arg(long)]
    map: PathBuf,
}

#[derive(Subcommand)]
enum Cmd {
    /// Full pipeline report.
    Analyze {
        #[command(flatten)]
        map: MapArg,
        #[command(flatten)]
        common: Common,
        /// Skip the Perron–Frobenius iteration.
        #[arg(long)]
        skip_pf: bool,
    },
    /// Topological entropy by every applicable method.
    Entropy {
        #[command(flatten)]
        map: MapArg,
        #[command(flatten)]
        common: Common,
        /// Cylinder depth.
        #[arg(long, default_value_t = 12)]
        cylinders: usize,
    },
    /// Markov partition, incidence matrix and Perron data.
    Markov {
        #[command(flatten)]
        map: MapArg,
        #[command(flatten)]
        common: Common,
    },
    /// Dimension group presentation and state range.
    Dimension {
        #[command(flatten)]
        map: MapArg,
        #[command(flatten)]
        common: Common,
    },
    /// Transitivity, exactness and the decomposition into exact pieces.
    Decompose {
        #[command(flatten)]
        map: MapArg,
        #[command(flatten)]
        common: Common,
    },
    /// Perron–Frobenius eigenfunctions and cycle verification.
    Pf {
        #[command(flatten)]
        map: MapArg,
        #[command(flatten)]
        common: Common,
    },
    /// Increasing conjugacy of two continuous transitive maps.
    Compare {
        #[command(flatten)]
        map: MapArg,
        #[arg(long)]
        map2: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Brute-force checks.
    Oracle {
        #[command(subcommand)]
        check: OracleCmd,
    },
}

#[derive(Subcommand)]
enum OracleCmd {
    /// `ga_equal` by the k = q test against an exhaustive witness search.
    GaEqual {
        /// Integer matrix as JSON, e.g. [[1,1],[1,0]].
        #[arg(long)]
        matrix: String,
        #[arg(long)]
        x: String,
        #[arg(long, default_value_t = 0)]
        xn: usize,
        #[arg(long)]
        y: String,
        #[arg(long, default_value_t = 0)]
        yn: usize,
        #[arg(long, default_value_t = 12)]
        max_k: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Exact Perron–Frobenius eigenfunctions by linear solve on the Markov partition.
    PfSolve {
        #[command(flatten)]
        map: MapArg,
        #[command(flatten)]
        common: Common,
    },
    /// Cylinder counts of the symbolic coding.
    Cylinders {
        #[command(flatten)]
        map: MapArg,
        #[arg(long, default_value_t = 12)]
        n: usize,
        #[command(flatten)]
        common: Common,
    },
}

/// Failure with the process exit code it maps to.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Unsupported(_) => 3,
            _ => 2,
        };
        Failure { code, message: e.to_string() }
    }
}

fn invalid(field: &str, message: impl std::fmt::Display) -> Failure {
    Failure { code: 2, message: format!("invalid {field}: {message}") }
}

fn parse_tol(s: &str) -> Result<BigRational, Failure> {
    let t = s.trim();
    let value = match t.split_once(['e', 'E']) {
        Some((m, e)) => {
            let m = rat::parse(m).map_err(|e| invalid("--tol", e))?;
            let e: i32 = e.parse().map_err(|_| invalid("--tol", format!("bad exponent in {t:?}")))?;
            let ten = BigRational::from_integer(BigInt::from(10));
            let p = (0..e.unsigned_abs()).fold(BigRational::from_integer(BigInt::from(1)), |acc, _| acc * &ten);
            if e < 0 { m / p } else { m * p }
        }
        None => rat::parse(t).map_err(|e| invalid("--tol", e))?,
    };
    if value <= BigRational::from_integer(BigInt::from(0)) {
        return Err(invalid("--tol", "must be positive"));
    }
    Ok(value)
}

fn settings(c: &Common, cylinders: usize) -> Result<Settings, Failure> {
    Ok(Settings { bound: c.bound, tol: parse_tol(&c.tol)?, maxiter: c.maxiter, generic_s: c.generic_s, cylinders })
}

fn load(path: &PathBuf, flag: &str) -> Result<(MapSpec, PLMap), Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| invalid(flag, format!("{}: {e}", path.display())))?;
    let v: Value = serde_json::from_str(&text)
        .map_err(|e| invalid(flag, format!("{}: JSON error at line {} column {}: {e}", path.display(), e.line(), e.column())))?;
    let mut session = Session::new();
    build_map(&v, &mut session).map_err(Failure::from)
}

fn unsupported_if(v: &Value) -> Result<(), Failure> {
    if v.get("status").and_then(Value::as_str) == Some("unsupported") {
        return Err(Failure { code: 3, message: v["reason"].as_str().unwrap_or("unsupported").to_string() });
    }
    Ok(())
}

fn run(cmd: Cmd) -> Result<(Value, Common), Failure> {
    match cmd {
        Cmd::Analyze { map, common, skip_pf } => {
            let st = settings(&common, 12)?;
            let (spec, m) = load(&map.map, "--map")?;
            Ok((report::analyze(&spec, &m, &st, !skip_pf), common))
        }
        Cmd::Entropy { map, common, cylinders } => {
            let st = settings(&common, cylinders)?;
            let (_, m) = load(&map.map, "--map")?;
            Ok((json!({"entropy": report::entropy_methods(&m, &st)}), common))
        }
        Cmd::Markov { map, common } => {
            let (_, m) = load(&map.map, "--map")?;
            Ok((report::markov(&m, common.bound), common))
        }
        Cmd::Dimension { map, common } => {
            let st = settings(&common, 12)?;
            let (spec, m) = load(&map.map, "--map")?;
            let out = report::dimension(&spec, &m, &st);
            unsupported_if(&out["presentation"])?;
            Ok((out, common))
        }
        Cmd::Decompose { map, common } => {
            let (_, m) = load(&map.map, "--map")?;
            if m.classify().essentially_injective {
                return Err(Failure {
                    code: 3,
                    message: "essentially injective map: only its classification is reported".into(),
                });
            }
            Ok((report::decomposition(&m, common.bound), common))
        }
        Cmd::Pf { map, common } => {
            let st = settings(&common, 12)?;
            let (_, m) = load(&map.map, "--map")?;
            Ok((report::pf(&m, &st)?, common))
        }
        Cmd::Compare { map, map2, common } => {
            let (_, a) = load(&map.map, "--map")?;
            let (_, b) = load(&map2, "--map2")?;
            Ok((conjugacy_compare(&a, &b, common.bound).to_json(), common))
        }
        Cmd::Oracle { check } => match check {
            OracleCmd::GaEqual { matrix, x, xn, y, yn, max_k, common } => {
                let parse = |s: &str, f: &str| serde_json::from_str::<Value>(s).map_err(|e| invalid(f, e));
                let v = oracle::ga_equal_check(&parse(&matrix, "--matrix")?, &parse(&x, "--x")?, xn, &parse(&y, "--y")?, yn, max_k)?;
                Ok((v, common))
            }
            OracleCmd::PfSolve { map, common } => {
                let (_, m) = load(&map.map, "--map")?;
                Ok((oracle::pf_solve(&m, common.bound)?, common))
            }
            OracleCmd::Cylinders { map, n, common } => {
                let (_, m) = load(&map.map, "--map")?;
                Ok((oracle::cylinders(&m, n), common))
            }
        },
    }
}

fn emit(v: &Value, format: Format) {
    let body = match format {
        Format::Json => format!("{}\n", serde_json::to_string_pretty(v).expect("serializable")),
        Format::Text => text::render(v),
    };
    // A closed pipe (e.g. `| head`) is not an error worth reporting.
    let _ = std::io::stdout().write_all(body.as_bytes());
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    match run(cli.cmd) {
        Ok((report, common)) => {
            let out = if common.timing {
                json!({"report": report, "timing": {"elapsed_ms": start.elapsed().as_secs_f64() * 1000.0}})
            } else {
                report
            };
            emit(&out, common.format);
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("pwmap: {}", f.message);
            let kind = if f.code == 3 { "unsupported" } else { "invalid" };
            println!("{}", json!({"error": {"kind": kind, "message": f.message}}));
            ExitCode::from(f.code)
        }
    }
}
