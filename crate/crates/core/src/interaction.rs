//! The four-qubit Arthurs-Kelly coupling `H = K Σ_i σ^P_i σ^{A_i}_z`, its exact
//! unitary, Heisenberg-picture meters and the joint-measurement noise budget.

use std::f64::consts::FRAC_PI_3;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::operator::{levi_civita, pauli_on, Axis, DenseOperator, C64, I};
use crate::qubit::QubitId;
use crate::state::{expectation, tensor, variance, StateVector, NORM_TOL};

const SQRT_3: f64 = 1.732_050_807_568_877_2;

/// Tracking is undefined when `|sin 2θ|` is at or below this.
pub const SINGULAR_GUARD: f64 = 1e-9;

/// Interaction angle `θ = √3·K·T`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Theta(f64);

impl Theta {
    /// `cos θ = 1/2`, `sin θ = +√3/2`.
    pub const PLUS: Theta = Theta(FRAC_PI_3);
    /// `cos θ = 1/2`, `sin θ = −√3/2`.
    pub const MINUS: Theta = Theta(-FRAC_PI_3);

    pub fn new(radians: f64) -> Result<Self> {
        if radians.is_finite() {
            Ok(Theta(radians))
        } else {
            Err(Error::Contract(format!("theta must be finite, got {radians}")))
        }
    }

    /// Angle reached by coupling `k` acting for duration `t`.
    pub fn from_coupling(k: f64, t: f64) -> Result<Self> {
        Self::new(SQRT_3 * k * t)
    }

    pub fn radians(self) -> f64 {
        self.0
    }

    pub fn sin(self) -> f64 {
        self.0.sin()
    }

    pub fn cos(self) -> f64 {
        self.0.cos()
    }

    pub fn sin_2theta(self) -> f64 {
        (2.0 * self.0).sin()
    }
}

impl From<Sign> for Theta {
    fn from(sign: Sign) -> Theta {
        sign.theta()
    }
}

/// Selects one of the two maximally entangling angles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn theta(self) -> Theta {
        match self {
            Sign::Plus => Theta::PLUS,
            Sign::Minus => Theta::MINUS,
        }
    }

    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    /// Sign of `sin θ`, with `sin θ = 0` mapped to `Plus`.
    pub fn of(theta: Theta) -> Sign {
        if theta.sin() < 0.0 {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }
}

/// `σ^P_i σ^{A_i}_z` for meter `i` in 1..=3.
fn coupling_term(i: usize) -> Result<DenseOperator> {
    let sys = pauli_on(QubitId::P, Axis::from_index(i)?, 4)?;
    let meter = pauli_on(QubitId::meter(i)?, Axis::Z, 4)?;
    Ok(&sys * &meter)
}

/// `Σ_i σ^P_i σ^{A_i}_z`
fn coupling_sum() -> &'static DenseOperator {
    static SUM: OnceLock<DenseOperator> = OnceLock::new();
    SUM.get_or_init(|| {
        (1..=3).fold(DenseOperator::zeros(16), |acc, i| &acc + &coupling_term(i).expect("valid meter index"))
    })
}

pub fn ak_hamiltonian(k: f64) -> DenseOperator {
    coupling_sum().scale_real(k)
}

/// `U(θ) = cos θ·1 − (i/√3) sin θ·Σ_i σ^P_i σ^{A_i}_z`
pub fn ak_unitary_closed(theta: Theta) -> DenseOperator {
    let id = DenseOperator::identity(16).scale_real(theta.cos());
    let coupling = coupling_sum().scale(-I * (theta.sin() / SQRT_3));
    &id + &coupling
}

/// `exp(−iHT)` with `K = 1`, `T = θ/√3`, by Padé scaling and squaring.
pub fn ak_unitary_exp(theta: Theta) -> DenseOperator {
    let t = theta.radians() / SQRT_3;
    let generator = ak_hamiltonian(1.0).scale(-I * t);
    DenseOperator::from_matrix(generator.into_matrix().exp()).expect("16x16 stays square")
}

/// `|ψ⟩ ⊗ |+⟩ ⊗ |+⟩ ⊗ |+⟩`
pub fn initial_state(psi: &StateVector) -> Result<StateVector> {
    if psi.n_qubits() != 1 {
        return Err(Error::Layout(format!("system state must be one qubit, got {}", psi.n_qubits())));
    }
    if (psi.norm() - 1.0).abs() > NORM_TOL {
        return Err(Error::Contract(format!("system state norm {} is not 1", psi.norm())));
    }
    let p = StateVector::plus();
    tensor(&[psi.clone(), p.clone(), p.clone(), p])
}

pub fn evolve(psi: &StateVector, theta: Theta) -> Result<StateVector> {
    initial_state(psi)?.apply(&ak_unitary_closed(theta))
}

/// `σ^{A_i}_x(T)` assembled term by term:
///
/// `cos²θ σ^{A_i}_x − sin 2θ σ^P_i σ^{A_i}_y/√3
///  + (sin²θ/3)(σ^{A_i}_x + 2 σ^{A_i}_y Σ_{jk} ε_ijk σ^P_j σ^{A_k}_z)`
pub fn heisenberg_meter_x(i: usize, theta: Theta) -> Result<DenseOperator> {
    let meter = QubitId::meter(i)?;
    let mx = pauli_on(meter, Axis::X, 4)?;
    let my = pauli_on(meter, Axis::Y, 4)?;
    let (c, s) = (theta.cos(), theta.sin());

    let mut cross = DenseOperator::zeros(16);
    for j in 1..=3 {
        for k in 1..=3 {
            let eps = levi_civita(i, j, k);
            if eps == 0 {
                continue;
            }
            let term = &pauli_on(QubitId::P, Axis::from_index(j)?, 4)? * &pauli_on(QubitId::meter(k)?, Axis::Z, 4)?;
            cross = &cross + &term.scale_real(f64::from(eps));
        }
    }
    let tail = &mx + &(&my * &cross).scale_real(2.0);

    let sys_my = &pauli_on(QubitId::P, Axis::from_index(i)?, 4)? * &my;
    let out = &(&mx.scale_real(c * c) - &sys_my.scale_real(theta.sin_2theta() / SQRT_3))
        + &tail.scale_real(s * s / 3.0);
    Ok(out)
}

/// `U† σ^{A_i}_x U` by direct conjugation.
pub fn heisenberg_meter_x_conjugated(i: usize, theta: Theta) -> Result<DenseOperator> {
    let u = ak_unitary_closed(theta);
    let mx = pauli_on(QubitId::meter(i)?, Axis::X, 4)?;
    Ok(&(&u.adjoint() * &mx) * &u)
}

fn tracking_scale(theta: Theta) -> Result<f64> {
    let s2 = theta.sin_2theta();
    if s2.abs() <= SINGULAR_GUARD {
        return Err(Error::SingularScaling { theta: theta.radians(), sin_2theta: s2 });
    }
    Ok(-SQRT_3 / s2)
}

/// `Σ_i = −√3/sin 2θ · σ^{A_i}_x(T)`
pub fn tracking_observable(i: usize, theta: Theta) -> Result<DenseOperator> {
    let scale = tracking_scale(theta)?;
    Ok(heisenberg_meter_x(i, theta)?.scale_real(scale))
}

/// Predicted per-axis excess noise `3/sin²2θ − 1`.
pub fn tracking_excess_noise(theta: Theta) -> Result<f64> {
    let s = tracking_scale(theta)?;
    Ok(s * s - 1.0)
}

/// Predicted total tracking noise `9/sin²2θ − 1`.
pub fn tracking_noise_sum(theta: Theta) -> Result<f64> {
    let s = tracking_scale(theta)?;
    Ok(3.0 * s * s - 1.0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct UncertaintyReport {
    pub theta: Theta,
    /// `(Δσ^P_i)²` in the system state.
    pub system_variances: [f64; 3],
    /// `(ΔΣ_i)²` in the initial four-qubit state.
    pub tracking_variances: [f64; 3],
    /// `⟨Σ_i⟩` in the initial four-qubit state.
    pub tracking_means: [f64; 3],
    /// `⟨σ^P_i⟩` in the system state.
    pub system_means: [f64; 3],
}

impl UncertaintyReport {
    pub fn differences(&self) -> [f64; 3] {
        std::array::from_fn(|k| self.tracking_variances[k] - self.system_variances[k])
    }

    pub fn system_sum(&self) -> f64 {
        self.system_variances.iter().sum()
    }

    pub fn tracking_sum(&self) -> f64 {
        self.tracking_variances.iter().sum()
    }
}

pub fn uncertainty_report(psi: &StateVector, theta: Theta) -> Result<UncertaintyReport> {
    tracking_scale(theta)?;
    let start = initial_state(psi)?;
    let mut report = UncertaintyReport {
        theta,
        system_variances: [0.0; 3],
        tracking_variances: [0.0; 3],
        tracking_means: [0.0; 3],
        system_means: [0.0; 3],
    };
    for (k, axis) in Axis::ALL.into_iter().enumerate() {
        let sys = crate::operator::pauli(axis);
        let track = tracking_observable(axis.index(), theta)?;
        report.system_variances[k] = variance(&sys, psi)?;
        report.system_means[k] = expectation(&sys, psi)?;
        report.tracking_variances[k] = variance(&track, &start)?;
        report.tracking_means[k] = expectation(&track, &start)?;
    }
    Ok(report)
}

/// Real part of `⟨ψ,+,+,+|U(θ)|ψ,+,+,+⟩`, which equals `cos θ`.
pub fn survival_overlap(psi: &StateVector, theta: Theta) -> Result<C64> {
    let start = initial_state(psi)?;
    start.inner(&evolve(psi, theta)?)
}
