//! The `effectus` command line.
//!
//! Exit codes: 0 pass, 1 law failure, 2 usage or configuration error,
//! 3 internal error.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::eval;
use crate::harness::{self, Case, Instance, LawReport, Registry, Status, SuiteConfig, SCHEMA_VERSION};
use crate::sample::{UnitaryChoice, RNG_NAME};
use crate::tol::Tolerances;

pub const EXIT_PASS: u8 = 0;
pub const EXIT_FAIL: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_INTERNAL: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "effectus", version, about = "Law checking for effectus instances")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run law suites on one instance.
    Check(CheckArgs),
    /// Re-run recorded failing cases.
    Replay(ReplayArgs),
    /// Evaluate validity, conditioning or an assert from a JSON file.
    Eval(EvalArgs),
    /// List the registered suites.
    List(ListArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[arg(long, value_enum)]
    pub instance: Instance,
    /// Comma-separated suite names; all applicable suites by default.
    #[arg(long, value_delimiter = ',')]
    pub suites: Option<Vec<String>>,
    #[arg(long, env = "EFFECTUS_SEED", default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 200)]
    pub trials: usize,
    /// Tolerance override, `key=value`; repeatable.
    #[arg(long = "tol", value_name = "KEY=VALUE")]
    pub tol: Vec<String>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Also write the JSON report here.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = UnitaryChoice::Hadamard)]
    pub unitary: UnitaryChoice,
    #[arg(long, default_value_t = 3)]
    pub max_carrier: usize,
    /// Never enumerate; always sample.
    #[arg(long)]
    pub random_only: bool,
}

#[derive(Debug, Args)]
pub struct ReplayArgs {
    /// A case file, or a JSON report whose failures are replayed.
    pub file: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    pub file: PathBuf,
    #[arg(long = "tol", value_name = "KEY=VALUE")]
    pub tol: Vec<String>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct ListArgs {
    #[arg(long, value_enum)]
    pub instance: Option<Instance>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

/// The document written by `check --format json`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub instance: Instance,
    pub seed: u64,
    pub trials: usize,
    pub rng: String,
    pub tolerances: Tolerances,
    pub unitary: UnitaryChoice,
    pub max_carrier: usize,
    pub status: Status,
    pub suites: Vec<LawReport>,
}

/// Command output and exit code.
pub struct Run {
    pub stdout: String,
    pub code: u8,
}

fn tolerances(base: Tolerances, overrides: &[String]) -> Result<Tolerances> {
    let mut t = base;
    for o in overrides {
        t.set(o)?;
    }
    Ok(t)
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("reports serialize") + "\n"
}

pub fn check(a: &CheckArgs) -> Result<Run> {
    let mut cfg = SuiteConfig::new(a.instance)
        .seed(a.seed)
        .trials(a.trials)
        .unitary(a.unitary)
        .max_carrier(a.max_carrier)
        .tolerances(tolerances(Tolerances::default(), &a.tol)?);
    if a.random_only {
        cfg = cfg.random_only();
    }
    let reports = harness::run_all(a.suites.as_deref(), &cfg)?;
    let failed = reports.iter().any(|r| r.status == Status::Fail);
    let report = Report {
        schema_version: SCHEMA_VERSION,
        instance: a.instance,
        seed: a.seed,
        trials: a.trials,
        rng: RNG_NAME.to_string(),
        tolerances: cfg.tolerances,
        unitary: a.unitary,
        max_carrier: a.max_carrier,
        status: if failed { Status::Fail } else { Status::Pass },
        suites: reports,
    };
    if let Some(out) = &a.out {
        std::fs::write(out, to_json(&report)).map_err(|e| Error::Parse(format!("{}: {e}", out.display())))?;
    }
    let stdout = match a.format {
        Format::Json => to_json(&report),
        Format::Text => check_text(&report),
    };
    Ok(Run {
        stdout,
        code: if failed { EXIT_FAIL } else { EXIT_PASS },
    })
}

fn check_text(r: &Report) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "instance {}  seed {}  rng {}", r.instance, r.seed, r.rng);
    let (mut pass, mut fail, mut inconclusive) = (0, 0, 0);
    for l in &r.suites {
        let status = match l.status {
            Status::Pass => {
                pass += 1;
                "pass"
            }
            Status::Fail => {
                fail += 1;
                "FAIL"
            }
            Status::Inconclusive => {
                inconclusive += 1;
                "inconclusive"
            }
        };
        let mode = serde_json::to_value(l.mode).ok();
        let mode = mode.as_ref().and_then(|m| m.as_str()).unwrap_or("");
        let _ = writeln!(
            s,
            "{status:<12}  {:<18} {mode:<10} {:>8} cases  [{}]",
            l.suite, l.trials, l.anchor
        );
        if l.status == Status::Fail {
            let _ = writeln!(s, "  {} failing", l.failed_trials);
            if let Some(case) = l.failures.first() {
                for v in &case.violations {
                    let _ = writeln!(s, "  violated: {} {}", v.law, v.note);
                }
                let _ = writeln!(s, "  witness: {}", serde_json::to_string(case).unwrap_or_default());
            }
        }
    }
    let _ = writeln!(s, "{pass} pass, {fail} fail, {inconclusive} inconclusive");
    s
}

#[derive(Deserialize)]
#[serde(untagged)]
enum ReplayInput {
    Case(Box<Case>),
    Report(Box<Report>),
}

pub fn replay(a: &ReplayArgs) -> Result<Run> {
    let text = read(&a.file)?;
    let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
    if let Some(v) = value.get("schema_version").and_then(|v| v.as_u64()) {
        if v != SCHEMA_VERSION as u64 {
            return Err(Error::Parse(format!(
                "schema version {v} is not the supported version {SCHEMA_VERSION}"
            )));
        }
    }
    let cases: Vec<Case> = match serde_json::from_value(value).map_err(|e| Error::Parse(e.to_string()))? {
        ReplayInput::Case(c) => vec![*c],
        ReplayInput::Report(r) => r.suites.into_iter().flat_map(|s| s.failures).collect(),
    };
    let mut out = Vec::new();
    let mut failed = false;
    for case in &cases {
        let o = harness::replay(case)?;
        failed |= !o.violations.is_empty();
        out.push(serde_json::json!({
            "suite": case.suite,
            "instance": case.instance,
            "origin": case.origin,
            "reproduced": o.violations == case.violations,
            "violations": o.violations,
        }));
    }
    let stdout = match a.format {
        Format::Json => to_json(&out),
        Format::Text => {
            let mut s = String::new();
            for (case, o) in cases.iter().zip(&out) {
                let n = o["violations"].as_array().map_or(0, Vec::len);
                let _ = writeln!(
                    s,
                    "{} {} {}: {} violation(s){}",
                    case.instance,
                    case.suite,
                    serde_json::to_string(&case.origin).unwrap_or_default(),
                    n,
                    if o["reproduced"] == true { "" } else { " (differs from the record)" }
                );
            }
            if cases.is_empty() {
                s.push_str("no recorded failures\n");
            }
            s
        }
    };
    Ok(Run {
        stdout,
        code: if failed { EXIT_FAIL } else { EXIT_PASS },
    })
}

pub fn eval(a: &EvalArgs) -> Result<Run> {
    let mut req = eval::parse(&read(&a.file)?)?;
    if let eval::Request::Quantum { tolerances: t, .. } = &mut req {
        *t = Some(tolerances(t.unwrap_or_default(), &a.tol)?);
    } else if !a.tol.is_empty() {
        tolerances(Tolerances::default(), &a.tol)?;
    }
    let out = eval::evaluate(&req)?;
    let stdout = match a.format {
        Format::Json => to_json(&out),
        Format::Text => out.text(),
    };
    Ok(Run {
        stdout,
        code: EXIT_PASS,
    })
}

pub fn list(a: &ListArgs) -> Result<Run> {
    let registry = Registry::standard();
    let suites: Vec<_> = match a.instance {
        Some(i) => registry.applicable(i).collect(),
        None => registry.iter().collect(),
    };
    let stdout = match a.format {
        Format::Json => to_json(&suites),
        Format::Text => {
            let mut s = String::new();
            for info in suites {
                let inst: Vec<&str> = info.instances.iter().map(|i| i.name()).collect();
                let _ = writeln!(
                    s,
                    "{:<18} {:<22} {}{}",
                    info.name,
                    inst.join(","),
                    info.anchor,
                    if info.probe { "  (probe)" } else { "" }
                );
            }
            s
        }
    };
    Ok(Run {
        stdout,
        code: EXIT_PASS,
    })
}

pub fn execute(cli: &Cli) -> Result<Run> {
    match &cli.command {
        Command::Check(a) => check(a),
        Command::Replay(a) => replay(a),
        Command::Eval(a) => eval(a),
        Command::List(a) => list(a),
    }
}

/// Parses the process arguments, runs, and maps the outcome to an exit code.
pub fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS });
        }
    };
    match std::panic::catch_unwind(|| execute(&cli)) {
        Ok(Ok(run)) => {
            print!("{}", run.stdout);
            ExitCode::from(run.code)
        }
        Ok(Err(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(_) => {
            eprintln!("internal error");
            ExitCode::from(EXIT_INTERNAL)
        }
    }
}
