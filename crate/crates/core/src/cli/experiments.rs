use std::str::FromStr;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::operator::C64;
use crate::random::{random_qubit_state, stream_rng};
use crate::swap::{run_swap, SwapInput};
use crate::teleport::{path_string, run_protocol_recycling, DEFAULT_MAX_ROUNDS};

use super::table::{num, opt_num, Table};
use super::{CliError, RunConfig, VERSION};

/// Where swap trials take their `R–P` input from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SwapSource {
    Random,
    Bell,
    Product,
}

impl FromStr for SwapSource {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "random" => Ok(SwapSource::Random),
            "bell" => Ok(SwapSource::Bell),
            "product" => Ok(SwapSource::Product),
            other => Err(format!("unknown swap input '{other}' (expected random, bell or product)")),
        }
    }
}

fn gaussian_pair<R: Rng + ?Sized>(rng: &mut R) -> [C64; 2] {
    std::array::from_fn(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
}

fn draw_swap_input<R: Rng + ?Sized>(source: SwapSource, rng: &mut R) -> SwapInput {
    match source {
        SwapSource::Bell => SwapInput::bell(),
        SwapSource::Product => SwapInput::product(gaussian_pair(rng), gaussian_pair(rng)),
        SwapSource::Random => SwapInput {
            phi1: gaussian_pair(rng),
            psi1: gaussian_pair(rng),
            phi2: gaussian_pair(rng),
            psi2: gaussian_pair(rng),
        },
    }
}

/// Aggregate statistics of a teleport run.
#[derive(Debug, Clone, PartialEq)]
pub struct TeleportSummary {
    pub trials: usize,
    pub successes: usize,
    /// `round_counts[r - 1]` = trials that succeeded in round `r`.
    pub round_counts: Vec<usize>,
    pub mean_rounds: f64,
    pub min_fidelity: Option<f64>,
}

pub fn teleport_table(config: &RunConfig) -> Result<(String, TeleportSummary), CliError> {
    let mut t = Table::new(config.format);
    t.comment(&format!(
        "akq teleport version={VERSION} seed={} sign={} trials={} max_rounds={DEFAULT_MAX_ROUNDS}",
        config.seed,
        if config.sign.value() > 0.0 { '+' } else { '-' },
        config.trials
    ));
    t.record(&["trial", "rounds_used", "path", "success", "fidelity"]);

    let mut round_counts = vec![0usize; DEFAULT_MAX_ROUNDS];
    let mut rounds_total = 0usize;
    let mut min_fidelity: Option<f64> = None;
    for trial in 0..config.trials {
        let mut rng = stream_rng(config.seed, trial as u64);
        let psi = random_qubit_state(&mut rng);
        let out = run_protocol_recycling(&psi, config.sign, &mut rng, DEFAULT_MAX_ROUNDS)?;
        rounds_total += out.rounds_used;
        if out.succeeded() {
            round_counts[out.rounds_used - 1] += 1;
        }
        if let Some(f) = out.fidelity_vs_input {
            min_fidelity = Some(min_fidelity.map_or(f, |m| m.min(f)));
        }
        t.record(&[
            trial.to_string(),
            out.rounds_used.to_string(),
            path_string(&out.path),
            u8::from(out.succeeded()).to_string(),
            opt_num(out.fidelity_vs_input),
        ]);
    }

    let successes: usize = round_counts.iter().sum();
    let last = round_counts.iter().rposition(|&c| c > 0).map_or(0, |i| i + 1);
    round_counts.truncate(last);
    let summary = TeleportSummary {
        trials: config.trials,
        successes,
        mean_rounds: rounds_total as f64 / config.trials as f64,
        min_fidelity,
        round_counts,
    };

    t.comment(&format!(
        "aggregate trials={} successes={} truncated={}",
        summary.trials,
        summary.successes,
        summary.trials - summary.successes
    ));
    t.comment_record(&["round", "count", "empirical", "expected"]);
    for (k, &count) in summary.round_counts.iter().enumerate() {
        t.comment_record(&[
            (k + 1).to_string(),
            count.to_string(),
            num(count as f64 / summary.trials as f64),
            num(0.5f64.powi(k as i32 + 1)),
        ]);
    }
    t.comment(&format!("mean_rounds={} expected=2", num(summary.mean_rounds)));
    t.comment(&format!("min_fidelity={}", opt_num(summary.min_fidelity)));
    Ok((t.finish(), summary))
}

pub fn swap_table(config: &RunConfig) -> Result<String, CliError> {
    let source_name = match config.swap_source {
        SwapSource::Random => "random",
        SwapSource::Bell => "bell",
        SwapSource::Product => "product",
    };
    let mut t = Table::new(config.format);
    t.comment(&format!(
        "akq swap version={VERSION} seed={} sign={} trials={} input={source_name}",
        config.seed,
        if config.sign.value() > 0.0 { '+' } else { '-' },
        config.trials
    ));
    t.record(&["trial", "rounds_used", "path", "input_r_entropy", "output_r_entropy", "fidelity"]);

    let mut min_fidelity: Option<f64> = None;
    let mut max_dev = 0.0f64;
    let mut successes = 0usize;
    for trial in 0..config.trials {
        let mut rng = stream_rng(config.seed, trial as u64);
        let input = draw_swap_input(config.swap_source, &mut rng);
        let out = run_swap(&input, config.sign, &mut rng)?;
        if let (Some(f), Some(e)) = (out.fidelity_vs_target, out.output_r_entropy) {
            successes += 1;
            min_fidelity = Some(min_fidelity.map_or(f, |m| m.min(f)));
            max_dev = max_dev.max((e - out.input_r_entropy).abs());
        }
        t.record(&[
            trial.to_string(),
            out.path.len().to_string(),
            path_string(&out.path),
            num(out.input_r_entropy),
            opt_num(out.output_r_entropy),
            opt_num(out.fidelity_vs_target),
        ]);
    }
    t.comment(&format!("aggregate trials={} successes={successes}", config.trials));
    t.comment(&format!("min_fidelity={}", opt_num(min_fidelity)));
    t.comment(&format!("max_entropy_deviation={}", num(max_dev)));
    Ok(t.finish())
}
