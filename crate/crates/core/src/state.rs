//! Pure states on the computational basis.
//!
//! Basis convention: `σ_z|0⟩ = |0⟩`, `σ_z|1⟩ = -|1⟩` and the `σ_y` eigenstates are
//! `|±⟩ = (|0⟩ ± i|1⟩)/√2`, so that `σ_y|±⟩ = ±|±⟩` and `σ_z|+⟩ = |−⟩`.

use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::operator::{DenseOperator, C64, I, ONE, ZERO};

/// Normalization tolerance enforced by constructors.
pub const NORM_TOL: f64 = 1e-9;

/// Largest imaginary part tolerated in the expectation of a Hermitian observable.
pub const EXPECTATION_IMAG_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amplitudes: DVector<C64>,
}

impl StateVector {
    /// Wraps already-normalized amplitudes.
    pub fn new(n_qubits: usize, amplitudes: Vec<C64>) -> Result<Self> {
        let s = Self::from_vector_unchecked(n_qubits, DVector::from_vec(amplitudes))?;
        let norm = s.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::Contract(format!("state norm {norm} is not 1")));
        }
        Ok(s)
    }

    /// Normalizes arbitrary amplitudes; zero vectors are rejected.
    pub fn normalized(n_qubits: usize, amplitudes: Vec<C64>) -> Result<Self> {
        Self::normalize_vector(n_qubits, DVector::from_vec(amplitudes))
    }

    pub(crate) fn normalize_vector(n_qubits: usize, v: DVector<C64>) -> Result<Self> {
        let norm = v.norm();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::Contract(format!("cannot normalize a vector of norm {norm}")));
        }
        Self::from_vector_unchecked(n_qubits, v.unscale(norm))
    }

    pub(crate) fn from_vector_unchecked(n_qubits: usize, amplitudes: DVector<C64>) -> Result<Self> {
        if n_qubits == 0 || amplitudes.len() != 1 << n_qubits {
            return Err(Error::Layout(format!(
                "{} amplitudes do not describe {n_qubits} qubits",
                amplitudes.len()
            )));
        }
        Ok(StateVector { n_qubits, amplitudes })
    }

    /// Single qubit `a|0⟩ + b|1⟩`; must already be normalized.
    pub fn qubit(a: C64, b: C64) -> Result<Self> {
        Self::new(1, vec![a, b])
    }

    pub fn zero() -> Self {
        StateVector { n_qubits: 1, amplitudes: DVector::from_vec(vec![ONE, ZERO]) }
    }

    pub fn one() -> Self {
        StateVector { n_qubits: 1, amplitudes: DVector::from_vec(vec![ZERO, ONE]) }
    }

    /// `(|0⟩ + i|1⟩)/√2`
    pub fn plus() -> Self {
        let h = C64::new(FRAC_1_SQRT_2, 0.0);
        StateVector { n_qubits: 1, amplitudes: DVector::from_vec(vec![h, I * h]) }
    }

    /// `(|0⟩ − i|1⟩)/√2`
    pub fn minus() -> Self {
        let h = C64::new(FRAC_1_SQRT_2, 0.0);
        StateVector { n_qubits: 1, amplitudes: DVector::from_vec(vec![h, -I * h]) }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        self.amplitudes.as_slice()
    }

    pub fn amplitude(&self, index: usize) -> C64 {
        self.amplitudes[index]
    }

    pub(crate) fn vector(&self) -> &DVector<C64> {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    /// `⟨self|other⟩`
    pub fn inner(&self, other: &StateVector) -> Result<C64> {
        if self.dim() != other.dim() {
            return Err(Error::Layout(format!("inner product of dims {} and {}", self.dim(), other.dim())));
        }
        Ok(self.amplitudes.dotc(&other.amplitudes))
    }

    /// Applies a unitary. Unitarity is the caller's responsibility.
    pub fn apply(&self, op: &DenseOperator) -> Result<StateVector> {
        if op.dim() != self.dim() {
            return Err(Error::Layout(format!("operator dim {} on state dim {}", op.dim(), self.dim())));
        }
        let v = op.matrix() * &self.amplitudes;
        debug_assert!((v.norm() - 1.0).abs() < NORM_TOL, "non-unitary operator applied");
        Ok(StateVector { n_qubits: self.n_qubits, amplitudes: v })
    }

    /// Multiplies by a global phase.
    pub fn with_phase(&self, phase: C64) -> StateVector {
        StateVector { n_qubits: self.n_qubits, amplitudes: &self.amplitudes * phase }
    }
}

/// Kronecker product in the given order; the first factor is most significant.
pub fn tensor(factors: &[StateVector]) -> Result<StateVector> {
    let (first, rest) = factors
        .split_first()
        .ok_or_else(|| Error::Contract("tensor of an empty factor list".into()))?;
    let mut out = first.clone();
    for f in std::iter::once(first).chain(rest) {
        if (f.norm() - 1.0).abs() > NORM_TOL {
            return Err(Error::Contract(format!("tensor factor has norm {}", f.norm())));
        }
    }
    for f in rest {
        out = StateVector {
            n_qubits: out.n_qubits + f.n_qubits,
            amplitudes: out.amplitudes.kronecker(&f.amplitudes),
        };
    }
    Ok(out)
}

/// Global-phase-insensitive overlap `|⟨a|b⟩|²`.
pub fn fidelity(a: &StateVector, b: &StateVector) -> Result<f64> {
    Ok(a.inner(b)?.norm_sqr())
}

fn check_observable(obs: &DenseOperator, state: &StateVector) -> Result<()> {
    if obs.dim() != state.dim() {
        return Err(Error::Layout(format!("observable dim {} on state dim {}", obs.dim(), state.dim())));
    }
    let defect = obs.hermiticity_defect();
    if defect >= crate::operator::OPERATOR_TOL {
        return Err(Error::Contract(format!("observable is not Hermitian (defect {defect:e})")));
    }
    Ok(())
}

/// `⟨state|obs|state⟩` for a Hermitian `obs`.
pub fn expectation(obs: &DenseOperator, state: &StateVector) -> Result<f64> {
    check_observable(obs, state)?;
    let raw = state.amplitudes.dotc(&(obs.matrix() * &state.amplitudes));
    if raw.im.abs() >= EXPECTATION_IMAG_TOL {
        return Err(Error::Inconsistency(format!("expectation has imaginary part {:e}", raw.im)));
    }
    Ok(raw.re)
}

/// `⟨obs²⟩ − ⟨obs⟩²`, with `⟨obs²⟩` computed as `‖obs|state⟩‖²`.
pub fn variance(obs: &DenseOperator, state: &StateVector) -> Result<f64> {
    check_observable(obs, state)?;
    let applied = obs.matrix() * &state.amplitudes;
    let mean = state.amplitudes.dotc(&applied);
    if mean.im.abs() >= EXPECTATION_IMAG_TOL {
        return Err(Error::Inconsistency(format!("expectation has imaginary part {:e}", mean.im)));
    }
    let var = applied.norm_squared() - mean.re * mean.re;
    if var < -1e-12 {
        return Err(Error::Inconsistency(format!("negative variance {var:e}")));
    }
    Ok(var.max(0.0))
}
