//! Entanglement swapping: teleporting `P` while it is entangled with a
//! spectator `R` leaves `R` entangled with `A2`.

use rand::Rng;

use crate::density::{extract_factor, partial_trace_slots, von_neumann_entropy};
use crate::error::{Error, Result};
use crate::interaction::{Sign, Theta};
use crate::measure::{outcome_probabilities, project_observable, OutcomeSource, Sampled, Scripted};
use crate::operator::{embed, pauli, Axis, C64};
use crate::state::{fidelity, tensor, StateVector};
use crate::teleport::{protocol_round, register_unitary, Branch, Slots, DEFAULT_MAX_ROUNDS};

/// Assembled norms at or below this are treated as cancellation.
pub const DEGENERATE_NORM: f64 = 1e-9;

/// `|φ1⟩^R|ψ1⟩^P + |φ2⟩^R|ψ2⟩^P` from raw (possibly unnormalized or zero) components.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SwapInput {
    pub phi1: [C64; 2],
    pub psi1: [C64; 2],
    pub phi2: [C64; 2],
    pub psi2: [C64; 2],
}

impl SwapInput {
    /// `(|00⟩ + |11⟩)/√2` on `R, P`.
    pub fn bell() -> Self {
        let (o, z) = (C64::new(1.0, 0.0), C64::new(0.0, 0.0));
        SwapInput { phi1: [o, z], psi1: [o, z], phi2: [z, o], psi2: [z, o] }
    }

    /// `|φ⟩^R|ψ⟩^P`
    pub fn product(phi: [C64; 2], psi: [C64; 2]) -> Self {
        let z = C64::new(0.0, 0.0);
        SwapInput { phi1: phi, psi1: psi, phi2: [z, z], psi2: [z, z] }
    }

    /// Normalized two-qubit state on `(R, P)`, or on `(R, A2)` as the swap target.
    pub fn joint_state(&self) -> Result<StateVector> {
        let mut amps = vec![C64::new(0.0, 0.0); 4];
        for (phi, psi) in [(self.phi1, self.psi1), (self.phi2, self.psi2)] {
            for r in 0..2 {
                for p in 0..2 {
                    amps[2 * r + p] += phi[r] * psi[p];
                }
            }
        }
        let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm.is_nan() || norm <= DEGENERATE_NORM {
            return Err(Error::DegenerateInput { norm });
        }
        StateVector::normalized(2, amps)
    }
}

/// Normalized `(|φ1⟩|ψ1⟩ + |φ2⟩|ψ2⟩) ⊗ |+,+,+⟩` on `R P A1 A2 A3`.
pub fn assemble_swap_state(input: &SwapInput) -> Result<StateVector> {
    let p = StateVector::plus();
    tensor(&[input.joint_state()?, p.clone(), p.clone(), p])
}

/// Entropy of `R` in a two-qubit state with `R` in front.
pub fn r_entropy(two_qubit: &StateVector) -> Result<f64> {
    Ok(von_neumann_entropy(&partial_trace_slots(two_qubit, &[0])?))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SwapRound {
    pub branch: Branch,
    /// `R ⊗ A2` after a first beam, `R ⊗ P` (restored) otherwise.
    pub state: StateVector,
}

fn swap_round<S: OutcomeSource + ?Sized>(joint: &StateVector, theta: Theta, source: &mut S) -> Result<SwapRound> {
    let slots = Slots::for_register(5)?;
    let (branch, state) = protocol_round(joint, theta, source)?;
    let keep = if branch.is_first() { [0, slots.a2] } else { [0, slots.p] };
    Ok(SwapRound { branch, state: extract_factor(&state, &keep)? })
}

/// One round with outcomes forced to `branch`.
pub fn run_swap_forced(input: &SwapInput, sign: Sign, branch: Branch) -> Result<SwapRound> {
    swap_round(&input.joint_state()?, sign.theta(), &mut Scripted::new(branch.script()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SwapOutcome {
    pub path: Vec<Branch>,
    /// Final `R ⊗ A2` state; `None` if the rounds ran out.
    pub final_state: Option<StateVector>,
    pub fidelity_vs_target: Option<f64>,
    pub input_r_entropy: f64,
    pub output_r_entropy: Option<f64>,
}

pub fn run_swap<R: Rng + ?Sized>(input: &SwapInput, sign: Sign, rng: &mut R) -> Result<SwapOutcome> {
    run_swap_with(input, sign, &mut Sampled(rng), DEFAULT_MAX_ROUNDS)
}

/// Recycles the restored `R ⊗ P` pair until a first beam or `max_rounds`.
pub fn run_swap_with<S: OutcomeSource + ?Sized>(
    input: &SwapInput,
    sign: Sign,
    source: &mut S,
    max_rounds: usize,
) -> Result<SwapOutcome> {
    if max_rounds == 0 {
        return Err(Error::Contract("max_rounds must be at least 1".into()));
    }
    let target = input.joint_state()?;
    let input_r_entropy = r_entropy(&target)?;
    let mut current = target.clone();
    let mut path = Vec::new();
    for _ in 0..max_rounds {
        let round = swap_round(&current, sign.theta(), source)?;
        path.push(round.branch);
        if round.branch.is_first() {
            return Ok(SwapOutcome {
                path,
                fidelity_vs_target: Some(fidelity(&round.state, &target)?),
                output_r_entropy: Some(r_entropy(&round.state)?),
                final_state: Some(round.state),
                input_r_entropy,
            });
        }
        current = round.state;
    }
    Ok(SwapOutcome { path, final_state: None, fidelity_vs_target: None, input_r_entropy, output_r_entropy: None })
}

/// Exact beam probabilities for an entangled input.
pub fn swap_branch_probabilities(input: &SwapInput, theta: Theta) -> Result<[f64; 3]> {
    let slots = Slots::for_register(5)?;
    let state = assemble_swap_state(input)?.apply(&register_unitary(theta, 5))?;
    let y = pauli(Axis::Y);
    let y1 = embed(&y, slots.a1, 5)?;
    let y3 = embed(&y, slots.a3, 5)?;
    let mut probs = [0.0; 3];
    for (k, (o1, o3)) in [(1, 1), (1, -1), (-1, 1)].into_iter().enumerate() {
        let first = match project_observable(&state, &y1, o1) {
            Ok(m) => m,
            Err(Error::ProjectionEmpty { .. }) => continue,
            Err(e) => return Err(e),
        };
        let (pp, pm) = outcome_probabilities(&first.post_state, &y3)?;
        probs[k] = first.probability * if o3 > 0 { pp } else { pm };
    }
    Ok(probs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::rng_from_seed;
    use std::f64::consts::LN_2;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn bell_input_assembly() {
        let s = assemble_swap_state(&SwapInput::bell()).unwrap();
        assert_eq!(s.n_qubits(), 5);
        assert!((s.norm() - 1.0).abs() < 1e-14);
        assert!((r_entropy(&SwapInput::bell().joint_state().unwrap()).unwrap() - LN_2).abs() < 1e-14);
    }

    #[test]
    fn product_limit() {
        let input = SwapInput::product([c(0.6, 0.0), c(0.0, 0.8)], [c(1.0, 0.0), c(0.0, 0.0)]);
        let joint = input.joint_state().unwrap();
        let expected = tensor(&[
            StateVector::qubit(c(0.6, 0.0), c(0.0, 0.8)).unwrap(),
            StateVector::zero(),
        ])
        .unwrap();
        assert!((fidelity(&joint, &expected).unwrap() - 1.0).abs() < 1e-14);
        assert!(r_entropy(&joint).unwrap() < 1e-12);
    }

    #[test]
    fn cancelling_terms_are_degenerate() {
        let z = [c(1.0, 0.0), c(0.0, 0.0)];
        let psi = [c(0.6, 0.0), c(0.8, 0.0)];
        let input = SwapInput { phi1: z, psi1: psi, phi2: z, psi2: psi.map(|v| -v) };
        assert!(matches!(assemble_swap_state(&input), Err(Error::DegenerateInput { .. })));
    }

    #[test]
    fn bell_pair_is_swapped_on_every_first_beam() {
        for sign in [Sign::Plus, Sign::Minus] {
            for z_p in [1, -1] {
                let r = run_swap_forced(&SwapInput::bell(), sign, Branch::First { z_p }).unwrap();
                let target = SwapInput::bell().joint_state().unwrap();
                assert!((fidelity(&r.state, &target).unwrap() - 1.0).abs() < 1e-10);
                assert!((r_entropy(&r.state).unwrap() - LN_2).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn sampled_swap_succeeds() {
        let mut rng = rng_from_seed(42);
        let out = run_swap(&SwapInput::bell(), Sign::Plus, &mut rng).unwrap();
        assert!(out.path.last().unwrap().is_first());
        assert!(out.fidelity_vs_target.unwrap() > 1.0 - 1e-10);
    }

    #[test]
    fn bell_branch_probabilities() {
        let p = swap_branch_probabilities(&SwapInput::bell(), Theta::PLUS).unwrap();
        for (x, e) in p.iter().zip([0.5, 0.25, 0.25]) {
            assert!((x - e).abs() < 1e-12);
        }
    }
}
