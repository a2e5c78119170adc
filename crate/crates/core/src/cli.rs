//! Command-line front end: `analyze`, `verify` and `branch`.

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scenario::Scenario;
use crate::so_branching::{sweep, verify_branching, BranchingCheck, HighestWeight};
use crate::spectrum::Spectrum;
use crate::verify::run_verification;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

/// Environment variable capping the worker pool.
pub const THREADS_ENV: &str = "CROSSED_SPECTRUM_THREADS";

#[derive(Parser, Debug)]
#[command(
    name = "crossed-spectrum",
    version,
    about = "Upper multiplicities of crossed products C0(X) x G for finite G"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
    Both,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Spectrum, upper multiplicities and the Fell/continuous-trace verdict.
    Analyze {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Both)]
        format: Format,
        /// Also write the JSON report here.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Numerical checks of the trace formulae on explicit induced matrices.
    #[command(visible_alias = "verify-trace")]
    Verify {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// Tolerance for trace-formula and conjugation checks.
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        tol_decomposition: Option<f64>,
        #[arg(long)]
        tol_limit: Option<f64>,
        #[arg(long, value_enum, default_value_t = Format::Both)]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Branching SO(n) -> SO(n-1) for one weight or a sweep.
    Branch {
        #[arg(long, required_unless_present = "sweep")]
        n: Option<usize>,
        /// Comma-separated highest weight, e.g. `1,1`.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required_unless_present = "sweep")]
        weight: Option<Vec<i64>>,
        #[arg(long, conflicts_with_all = ["n", "weight"])]
        sweep: bool,
        #[arg(long, default_value_t = 3)]
        max_entry: i64,
        #[arg(long, default_value_t = 6)]
        max_n: usize,
        #[arg(long, value_enum, default_value_t = Format::Both)]
        format: Format,
    },
}

/// Caps the global rayon pool from the environment. Call once at startup.
pub fn configure_threads() -> Result<()> {
    if let Ok(value) = std::env::var(THREADS_ENV) {
        let n: usize = value
            .trim()
            .parse()
            .map_err(|_| Error::Scenario(format!("{THREADS_ENV} must be a positive integer, got '{value}'")))?;
        if n == 0 {
            return Err(Error::Scenario(format!("{THREADS_ENV} must be positive")));
        }
        // a pool may already exist in tests; that is fine
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    Ok(())
}

pub fn exit_code(err: &Error) -> i32 {
    if err.is_input_error() {
        EXIT_INPUT
    } else {
        EXIT_INTERNAL
    }
}

fn emit<T: Serialize>(
    out: &mut dyn Write,
    format: Format,
    table: &str,
    value: &T,
    path: Option<&PathBuf>,
) -> Result<()> {
    let json = serde_json::to_string_pretty(value)?;
    if matches!(format, Format::Table | Format::Both) {
        write!(out, "{table}")?;
    }
    if format == Format::Both {
        writeln!(out)?;
    }
    if matches!(format, Format::Json | Format::Both) {
        writeln!(out, "{json}")?;
    }
    if let Some(p) = path {
        std::fs::write(p, format!("{json}\n"))?;
    }
    Ok(())
}

/// Runs a parsed command, writing to `out`; returns the exit code.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match dispatch(cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn dispatch(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    configure_threads()?;
    match cli.command {
        Command::Analyze { scenario, format, output } => {
            let built = Scenario::load(&scenario)?.build()?;
            let spectrum = Spectrum::new(&built.space, built.group_table.clone(), built.settings.tolerances)?;
            // asserts M_U = 1 on the linear-character set
            spectrum.char_open_set()?;
            let report = spectrum.report()?;
            emit(out, format, &report.to_table(), &report, output.as_ref())?;
            let mut violations = report.bound_violations();
            violations.extend(spectrum.corollary_violations(&report)?);
            for v in &violations {
                writeln!(err, "violation: {v}")?;
            }
            Ok(if violations.is_empty() { EXIT_OK } else { EXIT_VIOLATION })
        }
        Command::Verify { scenario, trials, seed, tol, tol_decomposition, tol_limit, format, output } => {
            let mut built = Scenario::load(&scenario)?.build()?;
            let s = &mut built.settings;
            if let Some(t) = trials {
                s.trials = t;
                s.decomposition_trials = t;
            }
            if let Some(x) = seed {
                s.seed = x;
            }
            if let Some(t) = tol {
                s.tolerances.identity = t;
            }
            if let Some(t) = tol_decomposition {
                s.tolerances.decomposition = t;
            }
            if let Some(t) = tol_limit {
                s.tolerances.limit = t;
            }
            let report = run_verification(&built)?;
            emit(out, format, &report.to_table(), &report, output.as_ref())?;
            for f in report.failures() {
                writeln!(err, "failed: {f}")?;
            }
            Ok(if report.passed { EXIT_OK } else { EXIT_VIOLATION })
        }
        Command::Branch { n, weight, sweep: is_sweep, max_entry, max_n, format } => {
            let checks: Vec<BranchingCheck> = if is_sweep {
                sweep(max_entry, max_n)?
            } else {
                let n = n.ok_or_else(|| Error::Weight("--n is required".into()))?;
                let w = HighestWeight::new(n, weight.unwrap_or_default())?;
                vec![verify_branching(&w)?]
            };
            let mut table = String::new();
            for c in &checks {
                let parts: Vec<String> = c.branches.iter().map(|(m, d)| format!("{m}[{d}]")).collect();
                table.push_str(&format!(
                    "{} dim {} -> {} | sum {} {}\n",
                    c.weight,
                    c.dimension,
                    parts.join(" + "),
                    c.dimension_sum,
                    if c.passed { "ok (M_U = 1)" } else { "FAIL" }
                ));
            }
            let failed = checks.iter().filter(|c| !c.passed).count();
            table.push_str(&format!("{} weights checked, {failed} failed\n", checks.len()));
            emit(out, format, &table, &checks, None)?;
            Ok(if failed == 0 { EXIT_OK } else { EXIT_VIOLATION })
        }
    }
}
