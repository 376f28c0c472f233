use crate::entanglement::{entanglement_entropy, schmidt_orthogonality_defect};
use crate::error::{Error, Result};
use crate::interaction::{uncertainty_report, Theta};
use crate::random::{random_qubit_state, rng_from_seed};
use crate::state::StateVector;
use crate::teleport::{branch_decomposition, imperfection_measure};

use super::table::{num, opt_num, Table};
use super::{CliError, RunConfig, VERSION};

/// Derived quantities at one angle. Noise columns are `None` where tracking is singular.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub theta: f64,
    pub entropy_nats: f64,
    pub lambda: f64,
    pub noise_sum: Option<f64>,
    pub tracking_noise_diff: Option<f64>,
    pub p1: f64,
    pub p2: f64,
    pub p3: f64,
    pub schmidt_defect: f64,
    pub imperfection: f64,
}

pub const SWEEP_COLUMNS: [&str; 10] = [
    "theta",
    "entropy_nats",
    "lambda",
    "noise_sum",
    "tracking_noise_diff",
    "p1",
    "p2",
    "p3",
    "schmidt_defect",
    "imperfection",
];

fn row(psi: &StateVector, theta: Theta) -> Result<SweepRow> {
    let e = entanglement_entropy(psi, theta)?;
    let (noise_sum, tracking_noise_diff) = match uncertainty_report(psi, theta) {
        Ok(r) => (Some(r.tracking_sum()), Some(r.differences().iter().sum::<f64>() / 3.0)),
        Err(Error::SingularScaling { .. }) => (None, None),
        Err(other) => return Err(other),
    };
    let b = branch_decomposition(psi, theta)?;
    Ok(SweepRow {
        theta: theta.radians(),
        entropy_nats: e.entropy_nats,
        lambda: e.lambda,
        noise_sum,
        tracking_noise_diff,
        p1: b.probabilities[0],
        p2: b.probabilities[1],
        p3: b.probabilities[2],
        schmidt_defect: schmidt_orthogonality_defect(psi, theta)?.defect,
        imperfection: imperfection_measure(theta),
    })
}

/// Evaluates every grid angle on one random system state drawn from `seed`.
/// Returns the state used and the rows.
pub fn sweep_rows(config: &RunConfig) -> Result<(StateVector, Vec<SweepRow>)> {
    let psi = random_qubit_state(&mut rng_from_seed(config.seed));
    let rows = config
        .theta
        .values()
        .into_iter()
        .map(|t| row(&psi, Theta::new(t)?))
        .collect::<Result<Vec<_>>>()?;
    Ok((psi, rows))
}

pub fn sweep_table(config: &RunConfig) -> std::result::Result<String, CliError> {
    let (psi, rows) = sweep_rows(config)?;
    let mut t = Table::new(config.format);
    let (a, b) = (psi.amplitude(0), psi.amplitude(1));
    t.comment(&format!("akq sweep version={VERSION} seed={}", config.seed));
    t.comment(&format!("psi re(a)={} im(a)={} re(b)={} im(b)={}", num(a.re), num(a.im), num(b.re), num(b.im)));
    t.record(&SWEEP_COLUMNS);
    for r in &rows {
        t.record(&[
            num(r.theta),
            num(r.entropy_nats),
            num(r.lambda),
            opt_num(r.noise_sum),
            opt_num(r.tracking_noise_diff),
            num(r.p1),
            num(r.p2),
            num(r.p3),
            num(r.schmidt_defect),
            num(r.imperfection),
        ]);
    }
    Ok(t.finish())
}
