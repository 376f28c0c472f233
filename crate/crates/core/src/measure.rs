//! Projective measurement of ±1-valued observables.

use nalgebra::DVector;
use rand::Rng;

use crate::error::{Error, Result};
use crate::operator::{DenseOperator, C64};
use crate::state::StateVector;

/// Born probabilities at or below this are treated as exact zeros.
pub const ZERO_PROBABILITY: f64 = 1e-24;

#[derive(Debug, Clone, PartialEq)]
pub struct MeasureOutcome {
    pub outcome: i8,
    pub probability: f64,
    pub post_state: StateVector,
}

/// Decides which eigenvalue a measurement reports.
pub trait OutcomeSource {
    /// Returns `+1` or `-1` given the Born probabilities of both outcomes.
    fn pick(&mut self, p_plus: f64, p_minus: f64) -> i8;
}

/// Born-rule sampling from an rng.
pub struct Sampled<'a, R: Rng + ?Sized>(pub &'a mut R);

impl<R: Rng + ?Sized> OutcomeSource for Sampled<'_, R> {
    fn pick(&mut self, p_plus: f64, p_minus: f64) -> i8 {
        if p_minus <= ZERO_PROBABILITY {
            return 1;
        }
        if p_plus <= ZERO_PROBABILITY {
            return -1;
        }
        let u: f64 = self.0.random::<f64>() * (p_plus + p_minus);
        if u < p_plus {
            1
        } else {
            -1
        }
    }
}

/// Replays a fixed list of outcomes, then reports `+1`.
#[derive(Debug, Clone, Default)]
pub struct Scripted {
    outcomes: Vec<i8>,
    next: usize,
}

impl Scripted {
    pub fn new(outcomes: impl Into<Vec<i8>>) -> Self {
        Scripted { outcomes: outcomes.into(), next: 0 }
    }
}

impl OutcomeSource for Scripted {
    fn pick(&mut self, _p_plus: f64, _p_minus: f64) -> i8 {
        let o = self.outcomes.get(self.next).copied().unwrap_or(1);
        self.next += 1;
        o
    }
}

/// Splits `state` into the unnormalized `+1` and `-1` eigenspace components.
fn split(state: &StateVector, obs: &DenseOperator) -> Result<(DVector<C64>, DVector<C64>)> {
    if obs.dim() != state.dim() {
        return Err(Error::Layout(format!("observable dim {} on state dim {}", obs.dim(), state.dim())));
    }
    let defect = obs.hermiticity_defect();
    if defect >= crate::operator::OPERATOR_TOL {
        return Err(Error::Contract(format!("observable is not Hermitian (defect {defect:e})")));
    }
    let v = state.vector();
    let ov = obs.matrix() * v;
    // A Hermitian involution satisfies O(Oψ) = ψ; checked on the state at hand.
    let back = obs.matrix() * &ov;
    let spill = (&back - v).iter().map(|z| z.norm()).fold(0.0, f64::max);
    if spill > 1e-10 {
        return Err(Error::Contract(format!("observable does not have a ±1 spectrum (|O²ψ − ψ| = {spill:e})")));
    }
    let plus = (v + &ov).scale(0.5);
    let minus = (v - &ov).scale(0.5);
    Ok((plus, minus))
}

/// Born probabilities `(p₊, p₋)` of a ±1-valued observable.
pub fn outcome_probabilities(state: &StateVector, obs: &DenseOperator) -> Result<(f64, f64)> {
    let (plus, minus) = split(state, obs)?;
    Ok((plus.norm_squared(), minus.norm_squared()))
}

/// Measures `obs` with outcomes chosen by `source`.
pub fn measure_with<S: OutcomeSource + ?Sized>(
    state: &StateVector,
    obs: &DenseOperator,
    source: &mut S,
) -> Result<MeasureOutcome> {
    let (plus, minus) = split(state, obs)?;
    let (pp, pm) = (plus.norm_squared(), minus.norm_squared());
    let outcome = source.pick(pp, pm);
    let (branch, probability) = if outcome > 0 { (plus, pp) } else { (minus, pm) };
    if probability <= ZERO_PROBABILITY {
        return Err(Error::ProjectionEmpty { outcome });
    }
    Ok(MeasureOutcome {
        outcome,
        probability,
        post_state: StateVector::normalize_vector(state.n_qubits(), branch)?,
    })
}

/// Samples a measurement of `obs` with Born probabilities.
pub fn measure_observable<R: Rng + ?Sized>(
    state: &StateVector,
    obs: &DenseOperator,
    rng: &mut R,
) -> Result<MeasureOutcome> {
    measure_with(state, obs, &mut Sampled(rng))
}

/// Projects onto the `outcome` eigenspace; zero-norm branches are errors.
pub fn project_observable(state: &StateVector, obs: &DenseOperator, outcome: i8) -> Result<MeasureOutcome> {
    measure_with(state, obs, &mut Scripted::new([outcome.signum()]))
}
