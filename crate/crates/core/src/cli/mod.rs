//! Command-line front end: identity checks, angle sweeps and Monte-Carlo runs.

mod args;
mod experiments;
mod sweep;
mod table;

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;

use thiserror::Error;

pub use args::{parse_angle, parse_grid, Cli};
pub use experiments::{swap_table, teleport_table, SwapSource, TeleportSummary};
pub use sweep::{sweep_rows, sweep_table, SweepRow};
pub use table::Format;

use crate::interaction::Sign;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Verify,
    Sweep,
    Teleport,
    Swap,
}

/// Angles requested on the command line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ThetaSpec {
    Single(f64),
    /// Inclusive linear grid.
    Grid { start: f64, stop: f64, count: usize },
}

impl ThetaSpec {
    /// 97 points over `[0, π]`: contains π/4, π/3, π/2 and 2π/3.
    pub const DEFAULT_GRID: ThetaSpec = ThetaSpec::Grid { start: 0.0, stop: std::f64::consts::PI, count: 97 };

    pub fn values(&self) -> Vec<f64> {
        match *self {
            ThetaSpec::Single(t) => vec![t],
            ThetaSpec::Grid { start, stop, count } => {
                let step = (stop - start) / (count - 1) as f64;
                (0..count).map(|k| if k + 1 == count { stop } else { start + step * k as f64 }).collect()
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub theta: ThetaSpec,
    pub sign: Sign,
    pub trials: usize,
    pub seed: u64,
    pub out_path: Option<PathBuf>,
    pub format: Format,
    pub swap_source: SwapSource,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        RunConfig {
            command,
            theta: ThetaSpec::DEFAULT_GRID,
            sign: Sign::Plus,
            trials: 1000,
            seed: 42,
            out_path: None,
            format: Format::Csv,
            swap_source: SwapSource::Random,
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.trials == 0 {
            return Err(CliError::Usage("--trials must be at least 1".into()));
        }
        match self.theta {
            ThetaSpec::Grid { count, .. } if count < 2 => {
                Err(CliError::Usage("--theta-grid count must be at least 2".into()))
            }
            ThetaSpec::Grid { start, stop, .. } if !(start.is_finite() && stop.is_finite()) => {
                Err(CliError::Usage("--theta-grid bounds must be finite".into()))
            }
            ThetaSpec::Single(t) if !t.is_finite() => Err(CliError::Usage("--theta must be finite".into())),
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("cannot write {path}: {source}")]
    Io { path: String, source: io::Error },
    #[error(transparent)]
    Simulation(#[from] crate::error::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Io { .. } => EXIT_IO,
            CliError::Simulation(_) => EXIT_VERIFY_FAILED,
        }
    }
}

/// Rendered command output and the exit status it implies.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub body: String,
    pub exit_code: i32,
}

/// Verification report: one line per identity.
pub fn verify_report(config: &RunConfig) -> Result<Report, CliError> {
    let checks = crate::verify::run_all(config.seed)?;
    let mut body = format!("# akq verify version={VERSION} seed={}\n", config.seed);
    for c in &checks {
        body.push_str(&format!(
            "{} {:<30} max_err={:.3e} tol={:.0e} {}\n",
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            c.max_error,
            c.tolerance,
            c.description
        ));
    }
    let failed: Vec<&str> = checks.iter().filter(|c| !c.passed).map(|c| c.name).collect();
    if failed.is_empty() {
        body.push_str(&format!("# all {} checks passed\n", checks.len()));
    } else {
        body.push_str(&format!("# FAILED: {}\n", failed.join(", ")));
    }
    Ok(Report { body, exit_code: if failed.is_empty() { EXIT_OK } else { EXIT_VERIFY_FAILED } })
}

/// Produces the output of `config.command` without touching the filesystem.
pub fn render(config: &RunConfig) -> Result<Report, CliError> {
    config.validate()?;
    let ok = |body| Report { body, exit_code: EXIT_OK };
    match config.command {
        Command::Verify => verify_report(config),
        Command::Sweep => Ok(ok(sweep_table(config)?)),
        Command::Teleport => Ok(ok(teleport_table(config)?.0)),
        Command::Swap => Ok(ok(swap_table(config)?)),
    }
}

/// Renders and writes to `--out` (or stdout); returns the exit code.
pub fn execute(config: &RunConfig) -> Result<i32, CliError> {
    let report = render(config)?;
    match &config.out_path {
        Some(path) => fs::write(path, report.body.as_bytes())
            .map_err(|source| CliError::Io { path: path.display().to_string(), source })?,
        None => io::stdout()
            .lock()
            .write_all(report.body.as_bytes())
            .map_err(|source| CliError::Io { path: "<stdout>".into(), source })?,
    }
    Ok(report.exit_code)
}
