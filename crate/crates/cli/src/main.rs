//! `twoqubit`: analysis, normal forms, state families, region export and
//! property verification for two-qubit density matrices.
//!
//! Exit codes: 0 success, 1 invalid input, 2 normal form not reached,
//! 3 property violation.

mod report;

use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use twoqubit::families::{
    mems, pure_schmidt, rank2_family, region_sample, werner, write_region_csv,
};
use twoqubit::filtering::{normal_form, DEFAULT_NORMAL_FORM_MAX_ITER, DEFAULT_NORMAL_FORM_TOL};
use twoqubit::qstate::{parse_state_json, state_to_json};
use twoqubit::verify::run_suite;
use twoqubit::{DensityMatrix, RegionKind, Suite, DEFAULT_SEED};

use report::{analyze, NormalFormJson};

#[derive(Parser, Debug)]
#[command(
    name = "twoqubit",
    version,
    about = "Entanglement and CHSH analysis of two-qubit states"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Full report for a state file ("-" reads standard input).
    Analyze {
        path: PathBuf,
        #[arg(long, default_value_t = DEFAULT_NORMAL_FORM_TOL)]
        tol: f64,
        #[arg(long, default_value_t = DEFAULT_NORMAL_FORM_MAX_ITER)]
        max_iter: usize,
    },
    /// Write a member of a named family as state JSON.
    Family {
        name: FamilyName,
        /// Concurrence (pure, mems, rank2).
        #[arg(long)]
        c: Option<f64>,
        /// Weight of |Φ⁺⟩ (werner).
        #[arg(long)]
        p: Option<f64>,
        /// Free parameter of the rank-2 family, |a| ≤ √(1 − C²).
        #[arg(long, allow_negative_numbers = true)]
        a: Option<f64>,
        /// Four weights on Φ⁺, Φ⁻, Ψ⁺, Ψ⁻ (bell-diag).
        #[arg(long, value_delimiter = ',')]
        weights: Option<Vec<f64>>,
    },
    /// Sample the concurrence–violation region as CSV.
    Region {
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value = "mixed-hs")]
        kind: String,
        /// Output file; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a property suite; exits 3 if any property is violated.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Bell-diagonal normal form of a state file ("-" reads standard input).
    NormalForm {
        path: PathBuf,
        #[arg(long, default_value_t = DEFAULT_NORMAL_FORM_TOL)]
        tol: f64,
        #[arg(long, default_value_t = DEFAULT_NORMAL_FORM_MAX_ITER)]
        max_iter: usize,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FamilyName {
    Pure,
    Werner,
    Mems,
    Rank2,
    BellDiag,
}

enum Failure {
    Invalid(String),
    NotConverged,
    Violation,
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Invalid(_) => 1,
            Failure::NotConverged => 2,
            Failure::Violation => 3,
        }
    }
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Invalid(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            if let Failure::Invalid(msg) = &failure {
                eprintln!("error: {msg}");
            }
            ExitCode::from(failure.code())
        }
    }
}

fn read_state(path: &PathBuf) -> Result<DensityMatrix, Failure> {
    let text = if path.as_os_str() == "-" {
        let mut buf = String::new();
        io::stdin().read_to_string(&mut buf)?;
        buf
    } else {
        fs::read_to_string(path)
            .map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))?
    };
    Ok(parse_state_json(&text)?)
}

fn print_json<T: Serialize>(value: &T) -> Result<(), Failure> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

fn require(value: Option<f64>, flag: &str) -> Result<f64, Failure> {
    value.ok_or_else(|| Failure::Invalid(format!("missing --{flag}")))
}

fn build_family(
    name: FamilyName,
    c: Option<f64>,
    p: Option<f64>,
    a: Option<f64>,
    weights: Option<Vec<f64>>,
) -> Result<DensityMatrix, Failure> {
    let state = match name {
        FamilyName::Pure => pure_schmidt(require(c, "c")?)?,
        FamilyName::Werner => werner(require(p, "p")?)?,
        FamilyName::Mems => mems(require(c, "c")?)?,
        FamilyName::Rank2 => rank2_family(require(c, "c")?, a.unwrap_or(0.0))?,
        FamilyName::BellDiag => {
            let w = weights.ok_or_else(|| Failure::Invalid("missing --weights".into()))?;
            let w: [f64; 4] = w
                .try_into()
                .map_err(|_| Failure::Invalid("--weights needs four values".into()))?;
            DensityMatrix::bell_diagonal(w)?
        }
    };
    Ok(state)
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Analyze {
            path,
            tol,
            max_iter,
        } => {
            let rho = read_state(&path)?;
            let report = analyze(&rho, tol, max_iter);
            print_json(&report)?;
            if !report.normal_form_converged {
                return Err(Failure::NotConverged);
            }
        }
        Command::Family {
            name,
            c,
            p,
            a,
            weights,
        } => {
            let rho = build_family(name, c, p, a, weights)?;
            println!("{}", state_to_json(&rho));
        }
        Command::Region {
            samples,
            seed,
            kind,
            out,
        } => {
            if samples == 0 {
                return Err(Failure::Invalid("--samples must be at least 1".into()));
            }
            let kind: RegionKind = kind.parse()?;
            let mut csv = Vec::new();
            write_region_csv(&mut csv, &region_sample(seed, samples, kind))?;
            match out {
                Some(path) => fs::write(&path, &csv)
                    .map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))?,
                None => io::stdout().lock().write_all(&csv)?,
            }
        }
        Command::Verify {
            suite,
            samples,
            seed,
        } => {
            let suite: Suite = suite.parse()?;
            let report = run_suite(suite, samples, seed);
            for p in &report.properties {
                eprintln!(
                    "{:<5} {}/{}: {} checks, {} violations, worst margin {}",
                    if p.passed() { "PASS" } else { "FAIL" },
                    p.suite,
                    p.property,
                    p.checked,
                    p.violations,
                    p.worst_margin
                        .map_or("n/a".to_string(), |m| format!("{m:.6e}")),
                );
            }
            print_json(&report)?;
            if !report.passed() {
                return Err(Failure::Violation);
            }
        }
        Command::NormalForm {
            path,
            tol,
            max_iter,
        } => {
            let rho = read_state(&path)?;
            let nf = match normal_form(&rho, tol, max_iter) {
                Ok(nf) => nf,
                Err(e) => {
                    eprintln!("error: {e}");
                    return Err(Failure::NotConverged);
                }
            };
            print_json(&NormalFormJson::from(&nf))?;
            if !nf.converged {
                return Err(Failure::NotConverged);
            }
        }
    }
    Ok(())
}
