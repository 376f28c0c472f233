//! System-apparatus entanglement generated by the interaction.

use crate::density::{entropy_of_spectrum, partial_trace, DensityMatrix};
use crate::error::{Error, Result};
use crate::interaction::{evolve, initial_state, Sign, Theta};
use crate::operator::{C64, I, ZERO};
use crate::qubit::QubitId;
use crate::state::{tensor, StateVector};

const APPARATUS: [QubitId; 3] = [QubitId::A1, QubitId::A2, QubitId::A3];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyPoint {
    pub theta: Theta,
    /// Smaller eigenvalue of the reduced system state (`λ ≤ 1/2`).
    pub lambda: f64,
    pub entropy_nats: f64,
}

impl EntropyPoint {
    fn from_lambda(theta: Theta, lambda: f64) -> Self {
        let lambda = lambda.clamp(0.0, 0.5);
        EntropyPoint { theta, lambda, entropy_nats: entropy_of_spectrum(&[lambda, 1.0 - lambda]) }
    }
}

pub fn reduced_system_density(psi: &StateVector, theta: Theta) -> Result<DensityMatrix> {
    partial_trace(&evolve(psi, theta)?, &[QubitId::P])
}

pub fn reduced_apparatus_density(psi: &StateVector, theta: Theta) -> Result<DensityMatrix> {
    partial_trace(&evolve(psi, theta)?, &APPARATUS)
}

/// Entropy of the simulated reduced system state.
pub fn entanglement_entropy(psi: &StateVector, theta: Theta) -> Result<EntropyPoint> {
    let rho = reduced_system_density(psi, theta)?;
    let lambda = rho.eigenvalues()[0];
    Ok(EntropyPoint::from_lambda(theta, lambda))
}

/// `det ρ^P = λ(1 − λ) = (2/9) sin²θ (1 + 2cos²θ)`
pub fn system_determinant(theta: Theta) -> f64 {
    let (s, c) = (theta.sin(), theta.cos());
    2.0 / 9.0 * s * s * (1.0 + 2.0 * c * c)
}

/// Entropy from the determinant alone, `λ = (1 − √(1 − 4d))/2`.
pub fn entropy_closed_form(theta: Theta) -> EntropyPoint {
    let d = system_determinant(theta).clamp(0.0, 0.25);
    let lambda = 0.5 * (1.0 - (1.0 - 4.0 * d).max(0.0).sqrt());
    EntropyPoint::from_lambda(theta, lambda)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchmidtDefect {
    /// `|⟨app₀|app₁⟩|` for the apparatus states multiplying `|0⟩` and `|1⟩`.
    pub defect: f64,
    /// True when `ψ` is (numerically) a `σ_z` eigenstate, so the defect vanishes
    /// for every `θ` and says nothing about orthogonality.
    pub degenerate: bool,
}

/// Overlap of the two apparatus branches of the evolved state.
pub fn schmidt_orthogonality_defect(psi: &StateVector, theta: Theta) -> Result<SchmidtDefect> {
    let t = evolve(psi, theta)?;
    let (app0, app1) = t.amplitudes().split_at(8);
    let overlap: C64 = app0.iter().zip(app1).map(|(x, y)| x.conj() * y).sum();
    let ab = (psi.amplitude(0) * psi.amplitude(1)).norm();
    Ok(SchmidtDefect { defect: overlap.norm(), degenerate: ab < 1e-9 })
}

/// Maximally entangled final state `|T±⟩`, written out in the `|±⟩` meter basis
/// rather than obtained by evolution.
pub fn maximally_entangled_state(psi: &StateVector, sign: Sign) -> Result<StateVector> {
    initial_state(psi)?;
    let (a, b) = (psi.amplitude(0), psi.amplitude(1));
    let (p, m) = (StateVector::plus(), StateVector::minus());
    let ket = |sys: &StateVector, m1: &StateVector, m2: &StateVector, m3: &StateVector| {
        tensor(&[sys.clone(), m1.clone(), m2.clone(), m3.clone()])
    };
    // ∓i for T±
    let k = -I * sign.value();
    let half = C64::new(0.5, 0.0);
    let terms: [(C64, StateVector); 8] = [
        (half * a, ket(&StateVector::zero(), &p, &p, &p)?),
        (half * k * b, ket(&StateVector::zero(), &m, &p, &p)?),
        (half * k * (-I) * b, ket(&StateVector::zero(), &p, &m, &p)?),
        (half * k * a, ket(&StateVector::zero(), &p, &p, &m)?),
        (half * b, ket(&StateVector::one(), &p, &p, &p)?),
        (half * k * a, ket(&StateVector::one(), &m, &p, &p)?),
        (half * k * I * a, ket(&StateVector::one(), &p, &m, &p)?),
        (half * k * (-b), ket(&StateVector::one(), &p, &p, &m)?),
    ];
    let mut amps = vec![ZERO; 16];
    for (coef, basis) in &terms {
        for (acc, v) in amps.iter_mut().zip(basis.amplitudes()) {
            *acc += coef * v;
        }
    }
    let out = StateVector::new(4, amps);
    out.map_err(|e| Error::Inconsistency(format!("maximally entangled state lost normalization: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::density::von_neumann_entropy;
    use crate::random::{random_qubit_state, rng_from_seed};
    use crate::state::fidelity;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, LN_2};

    fn th(v: f64) -> Theta {
        Theta::new(v).unwrap()
    }

    /// Closed-form reduced system entries for `ψ = a|0⟩ + b|1⟩`.
    fn rho_closed(psi: &StateVector, theta: Theta) -> [[C64; 2]; 2] {
        let (a, b) = (psi.amplitude(0), psi.amplitude(1));
        let (c2, s2) = (theta.cos().powi(2), theta.sin().powi(2));
        let r00 = c2 * a.norm_sqr() + s2 / 3.0 * (1.0 + b.norm_sqr());
        let r11 = c2 * b.norm_sqr() + s2 / 3.0 * (1.0 + a.norm_sqr());
        let r01 = a * b.conj() * (c2 - s2 / 3.0);
        [[C64::new(r00, 0.0), r01], [r01.conj(), C64::new(r11, 0.0)]]
    }

    #[test]
    fn reduced_density_matches_closed_form() {
        let mut rng = rng_from_seed(21);
        for k in 0..25 {
            let t = th(-3.0 + 0.25 * k as f64);
            let psi = random_qubit_state(&mut rng);
            let rho = reduced_system_density(&psi, t).unwrap();
            let expected = rho_closed(&psi, t);
            for (r, row) in expected.iter().enumerate() {
                for (c, want) in row.iter().enumerate() {
                    assert!((rho.get(r, c) - want).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn reduced_density_reference_points() {
        let mut rng = rng_from_seed(2);
        let psi = random_qubit_state(&mut rng);
        let rho = reduced_system_density(&psi, th(0.0)).unwrap();
        let pure = DensityMatrix::pure(&psi);
        for (x, y) in rho.matrix().iter().zip(pure.matrix().iter()) {
            assert!((x - y).norm() < 1e-14);
        }
        let ev = reduced_system_density(&psi, Theta::PLUS).unwrap().eigenvalues();
        assert!((ev[0] - 0.5).abs() < 1e-7 && (ev[1] - 0.5).abs() < 1e-7);
        let rho = reduced_system_density(&StateVector::zero(), th(FRAC_PI_4)).unwrap();
        assert!((rho.get(0, 0).re - 2.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn entropy_reference_points() {
        let psi = random_qubit_state(&mut rng_from_seed(8));
        assert!(entanglement_entropy(&psi, th(0.0)).unwrap().entropy_nats.abs() < 1e-12);
        assert!((entanglement_entropy(&psi, Theta::PLUS).unwrap().entropy_nats - LN_2).abs() < 1e-12);
        // λ² − λ + 2/9 = 0 → λ = 1/3
        let e = entanglement_entropy(&psi, th(FRAC_PI_4)).unwrap();
        assert!((e.lambda - 1.0 / 3.0).abs() < 1e-12);
        assert!((e.entropy_nats - (3f64.ln() - 2.0 / 3.0 * LN_2)).abs() < 1e-12);
    }

    #[test]
    fn closed_form_reference_points() {
        let z = entropy_closed_form(th(0.0));
        assert_eq!((z.lambda, z.entropy_nats), (0.0, 0.0));
        let m = entropy_closed_form(th(FRAC_PI_3));
        assert!((m.lambda - 0.5).abs() < 1e-7);
        assert!((m.entropy_nats - LN_2).abs() < 1e-12);
        let h = entropy_closed_form(th(FRAC_PI_2));
        assert!((system_determinant(th(FRAC_PI_2)) - 2.0 / 9.0).abs() < 1e-15);
        assert!((h.lambda - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn system_and_apparatus_entropies_agree() {
        let mut rng = rng_from_seed(13);
        for k in 0..10 {
            let t = th(0.3 * k as f64);
            let psi = random_qubit_state(&mut rng);
            let es = von_neumann_entropy(&reduced_system_density(&psi, t).unwrap());
            let ea = von_neumann_entropy(&reduced_apparatus_density(&psi, t).unwrap());
            assert!((es - ea).abs() < 1e-10);
        }
    }

    #[test]
    fn schmidt_defect_behaviour() {
        let mut rng = rng_from_seed(4);
        let psi = random_qubit_state(&mut rng);
        assert!(schmidt_orthogonality_defect(&psi, Theta::PLUS).unwrap().defect < 1e-12);
        let off = schmidt_orthogonality_defect(&psi, th(FRAC_PI_3 + 0.05)).unwrap();
        assert!(off.defect > 1e-6 && !off.degenerate);
        let h = FRAC_1_SQRT_2;
        let even = StateVector::qubit(C64::new(h, 0.0), C64::new(h, 0.0)).unwrap();
        assert!((schmidt_orthogonality_defect(&even, th(0.0)).unwrap().defect - 0.5).abs() < 1e-14);
        let flagged = schmidt_orthogonality_defect(&StateVector::one(), th(0.4)).unwrap();
        assert!(flagged.degenerate && flagged.defect < 1e-15);
    }

    #[test]
    fn explicit_maximal_states_match_evolution() {
        let mut rng = rng_from_seed(17);
        for _ in 0..20 {
            let psi = random_qubit_state(&mut rng);
            for sign in [Sign::Plus, Sign::Minus] {
                let explicit = maximally_entangled_state(&psi, sign).unwrap();
                let evolved = evolve(&psi, sign.theta()).unwrap();
                for (x, y) in explicit.amplitudes().iter().zip(evolved.amplitudes()) {
                    assert!((x - y).norm() < 1e-12);
                }
                assert!((fidelity(&explicit, &evolved).unwrap() - 1.0).abs() < 1e-12);
                let rho = partial_trace(&explicit, &[QubitId::P]).unwrap();
                assert!((von_neumann_entropy(&rho) - LN_2).abs() < 1e-12);
            }
        }
    }
}
