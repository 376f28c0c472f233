//! Teleportation of the system state onto meter `A2` by single-qubit
//! measurements after the interaction, with recycling of the failed beams.
//!
//! Round structure: measure `Y(A1)` then `Y(A3)`.
//! * `(+1, +1)`: first beam. Measure `Z(P)`, correct `A2` with `U1`/`U2`
//!   (`σ_z U1`/`σ_z U2` for the negative angle). `A2` now carries `ψ`.
//! * `(+1, −1)`: second beam. `Y(A2) = +1` with certainty; `σ_z` on `P` restores `ψ`.
//! * `(−1, +1)`: third beam. `Y(A2) = +1` with certainty; `σ_x` on `P` restores `ψ`.
//! * `(−1, −1)` has zero amplitude.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::sync::OnceLock;

use rand::Rng;

use crate::density::extract_factor;
use crate::error::{Error, Result};
use crate::interaction::{ak_unitary_closed, evolve, Sign, Theta};
use crate::measure::{measure_with, outcome_probabilities, OutcomeSource, Sampled, Scripted};
use crate::operator::{embed, pauli, pauli_on, Axis, DenseOperator, C64, I, ONE, ZERO};
use crate::qubit::{slot_mask, QubitId};
use crate::state::{fidelity, tensor, StateVector};

/// Default cap on recycling rounds.
pub const DEFAULT_MAX_ROUNDS: usize = 64;

/// Correction unitaries for the three beams.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrectionSet {
    pub u1: DenseOperator,
    pub u2: DenseOperator,
    pub u1_prime: DenseOperator,
    pub u2_prime: DenseOperator,
    pub u3: DenseOperator,
    pub u4: DenseOperator,
}

impl CorrectionSet {
    fn build() -> Self {
        let h = C64::new(FRAC_1_SQRT_2, 0.0);
        let u1 = DenseOperator::from_rows_2x2([[h, -I * h], [-h, -I * h]]);
        let u2 = DenseOperator::from_rows_2x2([[h, I * h], [h, -I * h]]);
        let z = pauli(Axis::Z);
        CorrectionSet {
            u1_prime: &z * &u1,
            u2_prime: &z * &u2,
            u1,
            u2,
            u3: z,
            u4: pauli(Axis::X),
        }
    }

    /// Shared immutable instance.
    pub fn get() -> &'static CorrectionSet {
        static SET: OnceLock<CorrectionSet> = OnceLock::new();
        SET.get_or_init(CorrectionSet::build)
    }

    /// Correction applied to `A2` in the first beam.
    pub fn first_beam(&self, sign: Sign, z_p: i8) -> &DenseOperator {
        match (sign, z_p > 0) {
            (Sign::Plus, true) => &self.u1,
            (Sign::Plus, false) => &self.u2,
            (Sign::Minus, true) => &self.u1_prime,
            (Sign::Minus, false) => &self.u2_prime,
        }
    }
}

/// Measurement record of one round.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    /// `Y(A1) = Y(A3) = +1`, followed by `Z(P) = z_p`.
    First { z_p: i8 },
    /// `Y(A1) = +1`, `Y(A3) = −1`.
    Second,
    /// `Y(A1) = −1`, `Y(A3) = +1`.
    Third,
}

impl Branch {
    /// `(Y(A1), Y(A3))`
    pub fn meter_outcomes(self) -> (i8, i8) {
        match self {
            Branch::First { .. } => (1, 1),
            Branch::Second => (1, -1),
            Branch::Third => (-1, 1),
        }
    }

    /// Beam number 1, 2 or 3.
    pub fn beam(self) -> u8 {
        match self {
            Branch::First { .. } => 1,
            Branch::Second => 2,
            Branch::Third => 3,
        }
    }

    pub fn is_first(self) -> bool {
        matches!(self, Branch::First { .. })
    }

    /// Outcome script reproducing this branch: `Y(A1)`, `Y(A3)`, then `Z(P)` or `Y(A2)`.
    pub(crate) fn script(self) -> [i8; 3] {
        match self {
            Branch::First { z_p } => [1, 1, z_p.signum()],
            Branch::Second => [1, -1, 1],
            Branch::Third => [-1, 1, 1],
        }
    }

    pub const ALL: [Branch; 4] = [Branch::First { z_p: 1 }, Branch::First { z_p: -1 }, Branch::Second, Branch::Third];
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Branch::First { z_p } => write!(f, "1{}", if *z_p > 0 { '+' } else { '-' }),
            Branch::Second => f.write_str("2"),
            Branch::Third => f.write_str("3"),
        }
    }
}

/// Formats a path as beam numbers, e.g. `"3,2,1"`.
pub fn path_string(path: &[Branch]) -> String {
    path.iter().map(|b| b.beam().to_string()).collect::<Vec<_>>().join(",")
}

/// Slots of the protocol qubits in a register of `n` qubits (4, or 5 with `R` in front).
#[derive(Debug, Clone, Copy)]
pub(crate) struct Slots {
    pub n: usize,
    pub p: usize,
    pub a1: usize,
    pub a2: usize,
    pub a3: usize,
}

impl Slots {
    pub fn for_register(n: usize) -> Result<Self> {
        Ok(Slots {
            n,
            p: QubitId::P.position(n)?,
            a1: QubitId::A1.position(n)?,
            a2: QubitId::A2.position(n)?,
            a3: QubitId::A3.position(n)?,
        })
    }
}

/// Observable cache for one register size.
struct Observables {
    y_a1: DenseOperator,
    y_a2: DenseOperator,
    y_a3: DenseOperator,
    z_p: DenseOperator,
}

impl Observables {
    /// Shared instance for the 4- or 5-qubit register.
    fn for_register(n: usize) -> Result<&'static Observables> {
        static FOUR: OnceLock<Observables> = OnceLock::new();
        static FIVE: OnceLock<Observables> = OnceLock::new();
        let cell = match n {
            4 => &FOUR,
            5 => &FIVE,
            _ => return Err(Error::Layout(format!("protocol register must have 4 or 5 qubits, got {n}"))),
        };
        if let Some(obs) = cell.get() {
            return Ok(obs);
        }
        let built = Observables::new(Slots::for_register(n)?)?;
        Ok(cell.get_or_init(|| built))
    }

    fn new(slots: Slots) -> Result<Self> {
        let y = pauli(Axis::Y);
        Ok(Observables {
            y_a1: embed(&y, slots.a1, slots.n)?,
            y_a2: embed(&y, slots.a2, slots.n)?,
            y_a3: embed(&y, slots.a3, slots.n)?,
            z_p: embed(&pauli(Axis::Z), slots.p, slots.n)?,
        })
    }
}

/// Unitary of the interaction on a register whose last four slots are `P A1 A2 A3`.
pub(crate) fn register_unitary(theta: Theta, n: usize) -> DenseOperator {
    let u = ak_unitary_closed(theta);
    if n == 4 {
        u
    } else {
        DenseOperator::identity(1 << (n - 4)).kron(&u)
    }
}

/// Runs one interaction-and-measurement round on `input ⊗ |+,+,+⟩`, where the
/// last qubit of `input` is `P`. Returns the branch and the full corrected state.
pub(crate) fn protocol_round<S: OutcomeSource + ?Sized>(
    input: &StateVector,
    theta: Theta,
    source: &mut S,
) -> Result<(Branch, StateVector)> {
    let n = input.n_qubits() + 3;
    let slots = Slots::for_register(n)?;
    let obs = Observables::for_register(n)?;
    let p = StateVector::plus();
    let start = tensor(&[input.clone(), p.clone(), p.clone(), p])?;
    let state = start.apply(&register_unitary(theta, n))?;

    let forbidden = |e: Error| match e {
        Error::ProjectionEmpty { outcome } => {
            Error::Inconsistency(format!("measurement landed on a zero-probability outcome {outcome:+}"))
        }
        other => other,
    };

    let m1 = measure_with(&state, &obs.y_a1, source).map_err(forbidden)?;
    let m3 = measure_with(&m1.post_state, &obs.y_a3, source).map_err(forbidden)?;
    let corrections = CorrectionSet::get();
    match (m1.outcome, m3.outcome) {
        (1, 1) => {
            let mz = measure_with(&m3.post_state, &obs.z_p, source).map_err(forbidden)?;
            let fix = corrections.first_beam(Sign::of(theta), mz.outcome);
            let out = mz.post_state.apply(&embed(fix, slots.a2, n)?)?;
            Ok((Branch::First { z_p: mz.outcome }, out))
        }
        (y1, y3) if y1 != y3 => {
            let my2 = measure_with(&m3.post_state, &obs.y_a2, source).map_err(forbidden)?;
            if my2.outcome != 1 {
                return Err(Error::Inconsistency("Y(A2) = -1 in a recycling beam".into()));
            }
            let (branch, fix) = if y3 < 0 { (Branch::Second, &corrections.u3) } else { (Branch::Third, &corrections.u4) };
            let out = my2.post_state.apply(&embed(fix, slots.p, n)?)?;
            Ok((branch, out))
        }
        _ => Err(Error::Inconsistency("both Y(A1) and Y(A3) read -1".into())),
    }
}

/// What a round hands back.
#[derive(Debug, Clone, PartialEq)]
pub enum Carrier {
    /// Corrected `A2` state after a first-beam round.
    Teleported(StateVector),
    /// Corrected `P` state after a second- or third-beam round, ready for reuse.
    Recovered(StateVector),
}

impl Carrier {
    pub fn state(&self) -> &StateVector {
        match self {
            Carrier::Teleported(s) | Carrier::Recovered(s) => s,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RoundResult {
    pub branch: Branch,
    pub carrier: Carrier,
}

fn round_single<S: OutcomeSource + ?Sized>(psi: &StateVector, theta: Theta, source: &mut S) -> Result<RoundResult> {
    if psi.n_qubits() != 1 {
        return Err(Error::Layout(format!("system state must be one qubit, got {}", psi.n_qubits())));
    }
    let slots = Slots::for_register(4)?;
    let (branch, state) = protocol_round(psi, theta, source)?;
    let carrier = if branch.is_first() {
        Carrier::Teleported(extract_factor(&state, &[slots.a2])?)
    } else {
        Carrier::Recovered(extract_factor(&state, &[slots.p])?)
    };
    Ok(RoundResult { branch, carrier })
}

/// One sampled round at `θ = ±π/3`.
pub fn run_protocol_once<R: Rng + ?Sized>(psi: &StateVector, sign: Sign, rng: &mut R) -> Result<RoundResult> {
    round_single(psi, sign.theta(), &mut Sampled(rng))
}

/// One round with the measurement outcomes forced to `branch`.
pub fn run_protocol_forced(psi: &StateVector, sign: Sign, branch: Branch) -> Result<RoundResult> {
    run_round_at(psi, sign.theta(), branch)
}

/// Forced round at an arbitrary angle; first-beam corrections follow the sign of `sin θ`.
pub fn run_round_at(psi: &StateVector, theta: Theta, branch: Branch) -> Result<RoundResult> {
    round_single(psi, theta, &mut Scripted::new(branch.script()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct TeleportOutcome {
    pub rounds_used: usize,
    pub path: Vec<Branch>,
    /// `None` when `max_rounds` ran out before a first beam.
    pub carrier_state: Option<StateVector>,
    pub fidelity_vs_input: Option<f64>,
    pub seed: Option<u64>,
}

impl TeleportOutcome {
    pub fn succeeded(&self) -> bool {
        self.carrier_state.is_some()
    }
}

/// Sampled rounds with fresh meters until a first beam or `max_rounds`.
pub fn run_protocol_recycling<R: Rng + ?Sized>(
    psi: &StateVector,
    sign: Sign,
    rng: &mut R,
    max_rounds: usize,
) -> Result<TeleportOutcome> {
    run_recycling_at(psi, sign.theta(), &mut Sampled(rng), max_rounds)
}

/// Recycling loop at any angle with any outcome source.
pub fn run_recycling_at<S: OutcomeSource + ?Sized>(
    psi: &StateVector,
    theta: Theta,
    source: &mut S,
    max_rounds: usize,
) -> Result<TeleportOutcome> {
    if max_rounds == 0 {
        return Err(Error::Contract("max_rounds must be at least 1".into()));
    }
    let mut current = psi.clone();
    let mut path = Vec::new();
    for _ in 0..max_rounds {
        let round = round_single(&current, theta, source)?;
        path.push(round.branch);
        match round.carrier {
            Carrier::Teleported(a2) => {
                let f = fidelity(&a2, psi)?;
                return Ok(TeleportOutcome {
                    rounds_used: path.len(),
                    path,
                    carrier_state: Some(a2),
                    fidelity_vs_input: Some(f),
                    seed: None,
                });
            }
            Carrier::Recovered(p) => current = p,
        }
    }
    Ok(TeleportOutcome { rounds_used: path.len(), path, carrier_state: None, fidelity_vs_input: None, seed: None })
}

/// Projector `(1 + s·O)/2` applied to a raw amplitude vector.
fn project(v: &[C64], obs: &DenseOperator, outcome: i8) -> Vec<C64> {
    let s = f64::from(outcome.signum());
    let m = obs.matrix();
    (0..v.len())
        .map(|r| {
            let ov: C64 = (0..v.len()).map(|c| m[(r, c)] * v[c]).sum();
            (v[r] + ov * s) * 0.5
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct BranchDecomposition {
    /// Probabilities of the first, second and third beams.
    pub probabilities: [f64; 3],
    /// Normalized post-measurement four-qubit states; `None` for empty beams.
    pub states: [Option<StateVector>; 3],
    /// Probability of the forbidden `(−1, −1)` meter reading.
    pub forbidden_probability: f64,
}

/// Exact Born decomposition of the evolved state by `(Y(A1), Y(A3))`.
pub fn branch_decomposition(psi: &StateVector, theta: Theta) -> Result<BranchDecomposition> {
    let t = evolve(psi, theta)?;
    let y1 = pauli_on(QubitId::A1, Axis::Y, 4)?;
    let y3 = pauli_on(QubitId::A3, Axis::Y, 4)?;
    let piece = |o1: i8, o3: i8| project(&project(t.amplitudes(), &y1, o1), &y3, o3);
    let norm2 = |v: &[C64]| v.iter().map(|z| z.norm_sqr()).sum::<f64>();

    let beams = [piece(1, 1), piece(1, -1), piece(-1, 1)];
    let probabilities = [norm2(&beams[0]), norm2(&beams[1]), norm2(&beams[2])];
    let states = [0, 1, 2].map(|k| {
        (probabilities[k] > crate::measure::ZERO_PROBABILITY)
            .then(|| StateVector::normalized(4, beams[k].clone()).ok())
            .flatten()
    });
    Ok(BranchDecomposition { probabilities, states, forbidden_probability: norm2(&piece(-1, -1)) })
}

/// Closed-form beam probabilities `(cos²θ + sin²θ/3, sin²θ/3, sin²θ/3)`.
pub fn branch_probabilities_closed_form(theta: Theta) -> [f64; 3] {
    let s2 = theta.sin().powi(2);
    [1.0 - 2.0 * s2 / 3.0, s2 / 3.0, s2 / 3.0]
}

/// Conditional `Z(P) = ±1` probabilities inside the first beam.
pub fn first_beam_subbranch_probabilities(psi: &StateVector, theta: Theta) -> Result<(f64, f64)> {
    let d = branch_decomposition(psi, theta)?;
    let beam = d.states[0]
        .as_ref()
        .ok_or_else(|| Error::Inconsistency("first beam is empty".into()))?;
    outcome_probabilities(beam, &pauli_on(QubitId::P, Axis::Z, 4)?)
}

/// `2·(⟨z_p|⟨+|^{A1}⟨+|^{A3}) U(θ)|ψ,+,+,+⟩` as `A2` amplitudes, by direct
/// index contraction. Linear in `ψ`; `ψ` need not be normalized.
pub fn first_beam_amplitudes(psi: &[C64; 2], theta: Theta, z_p: i8) -> [C64; 2] {
    let u = ak_unitary_closed(theta);
    let plus = StateVector::plus();
    let start: Vec<C64> = {
        let app = tensor(&[plus.clone(), plus.clone(), plus.clone()]).expect("normalized factors");
        psi.iter().flat_map(|&c| app.amplitudes().iter().map(move |&x| c * x)).collect()
    };
    let evolved: Vec<C64> = (0..16).map(|r| (0..16).map(|c| u[(r, c)] * start[c]).sum()).collect();
    let zp_bit = usize::from(z_p < 0);
    let bra = [plus.amplitude(0).conj(), plus.amplitude(1).conj()];
    let mut out = [ZERO; 2];
    for (x2, slot) in out.iter_mut().enumerate() {
        for x1 in 0..2 {
            for x3 in 0..2 {
                let idx = zp_bit * slot_mask(0, 4) + x1 * slot_mask(1, 4) + x2 * slot_mask(2, 4) + x3 * slot_mask(3, 4);
                *slot += bra[x1] * bra[x3] * evolved[idx];
            }
        }
    }
    out.map(|z| z * 2.0)
}

/// The two first-beam maps `ψ ↦ A2` at angle `θ`.
///
/// `2·⟨0|⟨+|⟨+|T⟩ = k1 ψ` and `2·⟨1|⟨+|⟨+|T⟩ = k2 ψ` on the `A2` computational
/// basis. At `θ = π/3` these are `U1†` and `U2†`, which the corrections invert.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausPair {
    pub k1: DenseOperator,
    pub k2: DenseOperator,
    pub theta: Theta,
}

impl KrausPair {
    /// `(k1†k1 + k2†k2)/2 − 1`
    pub fn deviation(&self) -> DenseOperator {
        let sum = &(&self.k1.adjoint() * &self.k1) + &(&self.k2.adjoint() * &self.k2);
        &sum.scale_real(0.5) - &DenseOperator::identity(2)
    }

    /// Largest entry of `deviation() − imperfection·1`.
    pub fn identity_defect(&self) -> f64 {
        self.deviation()
            .max_abs_diff(&DenseOperator::identity(2).scale_real(imperfection_measure(self.theta)))
    }
}

pub fn kraus_maps(theta: Theta) -> KrausPair {
    let column = |z_p: i8, basis: [C64; 2]| first_beam_amplitudes(&basis, theta, z_p);
    let build = |z_p: i8| {
        let c0 = column(z_p, [ONE, ZERO]);
        let c1 = column(z_p, [ZERO, ONE]);
        DenseOperator::from_rows_2x2([[c0[0], c1[0]], [c0[1], c1[1]]])
    };
    KrausPair { k1: build(1), k2: build(-1), theta }
}

/// `1 − (4/3) sin²θ`; zero exactly at the maximally entangling angles.
pub fn imperfection_measure(theta: Theta) -> f64 {
    1.0 - 4.0 / 3.0 * theta.sin().powi(2)
}
