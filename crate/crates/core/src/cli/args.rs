use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::interaction::Sign;

use super::{Command, Format, RunConfig, SwapSource, ThetaSpec};

/// Arthurs-Kelly qubit interaction: identity checks, sweeps and protocol runs.
#[derive(Debug, Parser)]
#[command(name = "akq", version)]
pub struct Cli {
    #[command(subcommand)]
    command: Cmd,

    /// Single angle in radians; accepts forms like `pi/3`, `-2pi/3`, `0.7`.
    #[arg(long, global = true, allow_hyphen_values = true, value_parser = parse_angle, conflicts_with = "theta_grid")]
    theta: Option<f64>,

    /// Inclusive grid `start:stop:count` (default `0:pi:97`).
    #[arg(long = "theta-grid", global = true, allow_hyphen_values = true, value_parser = parse_grid)]
    theta_grid: Option<ThetaSpec>,

    /// Maximally entangling branch, `+` (θ = π/3) or `-` (θ = −π/3).
    #[arg(long, global = true, default_value = "+", allow_hyphen_values = true, value_parser = parse_sign)]
    sign: Sign,

    #[arg(long, global = true, default_value_t = 1000)]
    trials: usize,

    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,

    /// Output file; stdout when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// `csv` or `tsv`.
    #[arg(long, global = true, default_value = "csv")]
    format: Format,

    /// Swap inputs: `random`, `bell` or `product`.
    #[arg(long = "swap-input", global = true, default_value = "random")]
    swap_input: SwapSource,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Run every closed-form identity check.
    Verify,
    /// Tabulate entropy, noise, branch probabilities and imperfection against θ.
    Sweep,
    /// Monte-Carlo teleportation with recycling.
    Teleport,
    /// Monte-Carlo entanglement swapping.
    Swap,
}

impl Cli {
    pub fn into_config(self) -> RunConfig {
        let command = match self.command {
            Cmd::Verify => Command::Verify,
            Cmd::Sweep => Command::Sweep,
            Cmd::Teleport => Command::Teleport,
            Cmd::Swap => Command::Swap,
        };
        let theta = match (self.theta, self.theta_grid) {
            (Some(t), _) => ThetaSpec::Single(t),
            (None, Some(g)) => g,
            (None, None) => ThetaSpec::DEFAULT_GRID,
        };
        RunConfig {
            command,
            theta,
            sign: self.sign,
            trials: self.trials,
            seed: self.seed,
            out_path: self.out,
            format: self.format,
            swap_source: self.swap_input,
        }
    }
}

fn parse_number(s: &str) -> Result<f64, String> {
    s.trim().parse::<f64>().map_err(|_| format!("'{s}' is not a number"))
}

/// Parses `x`, `pi`, `kpi`, `k*pi`, each optionally followed by `/d`.
pub fn parse_angle(s: &str) -> Result<f64, String> {
    let t = s.trim().to_ascii_lowercase();
    let (neg, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t.strip_prefix('+').unwrap_or(&t)),
    };
    let (num, den) = match body.split_once('/') {
        Some((n, d)) => (n, Some(parse_number(d)?)),
        None => (body, None),
    };
    let mut value = match num.split_once("pi") {
        Some((coef, "")) => {
            let coef = coef.trim_end_matches('*');
            let c = if coef.is_empty() { 1.0 } else { parse_number(coef)? };
            c * std::f64::consts::PI
        }
        Some(_) => return Err(format!("cannot parse angle '{s}'")),
        None => parse_number(num)?,
    };
    if let Some(d) = den {
        if d == 0.0 {
            return Err(format!("zero denominator in '{s}'"));
        }
        value /= d;
    }
    if !value.is_finite() {
        return Err(format!("angle '{s}' is not finite"));
    }
    Ok(if neg { -value } else { value })
}

/// Parses `start:stop:count`.
pub fn parse_grid(s: &str) -> Result<ThetaSpec, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [start, stop, count] = parts[..] else {
        return Err(format!("expected start:stop:count, got '{s}'"));
    };
    let count: usize = count.trim().parse().map_err(|_| format!("grid count '{count}' is not an integer"))?;
    if count < 2 {
        return Err("grid count must be at least 2".into());
    }
    Ok(ThetaSpec::Grid { start: parse_angle(start)?, stop: parse_angle(stop)?, count })
}

fn parse_sign(s: &str) -> Result<Sign, String> {
    match s {
        "+" | "plus" | "+1" => Ok(Sign::Plus),
        "-" | "minus" | "-1" => Ok(Sign::Minus),
        other => Err(format!("sign must be + or -, got '{other}'")),
    }
}
