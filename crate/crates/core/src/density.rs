//! Reduced density matrices and von Neumann entropy.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::operator::{C64, ZERO};
use crate::qubit::{slot_mask, QubitId};
use crate::state::StateVector;

pub const DENSITY_TOL: f64 = 1e-12;

/// Hermitian, positive semidefinite, unit-trace matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    entries: DMatrix<C64>,
}

impl DensityMatrix {
    /// Validates the density-matrix invariants at `DENSITY_TOL`.
    pub fn new(entries: DMatrix<C64>) -> Result<Self> {
        let (r, c) = entries.shape();
        if r != c || r == 0 {
            return Err(Error::Layout(format!("density matrix shape {r}x{c}")));
        }
        let herm = entries
            .iter()
            .zip(entries.adjoint().iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        if herm >= DENSITY_TOL {
            return Err(Error::Contract(format!("density matrix not Hermitian (defect {herm:e})")));
        }
        let tr = entries.trace();
        if (tr - C64::new(1.0, 0.0)).norm() >= DENSITY_TOL {
            return Err(Error::Contract(format!("density matrix trace {tr}")));
        }
        let rho = DensityMatrix { entries };
        if let Some(&min) = rho.eigenvalues().first() {
            if min < -DENSITY_TOL {
                return Err(Error::Contract(format!("density matrix eigenvalue {min:e} < 0")));
            }
        }
        Ok(rho)
    }

    /// `|ψ⟩⟨ψ|`
    pub fn pure(state: &StateVector) -> Self {
        let v = state.vector();
        DensityMatrix { entries: v * v.adjoint() }
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.entries[(row, col)]
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = SymmetricEigen::new(self.entries.clone()).eigenvalues.iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    pub fn determinant(&self) -> f64 {
        self.entries.determinant().re
    }

    /// `Tr ρ²`
    pub fn purity(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum()
    }
}

/// Reduced state on the tensor slots in `keep` (any order; output keeps the
/// register's significance order).
pub fn partial_trace_slots(state: &StateVector, keep: &[usize]) -> Result<DensityMatrix> {
    let n = state.n_qubits();
    let mut slots = keep.to_vec();
    slots.sort_unstable();
    slots.dedup();
    if slots.is_empty() || slots.len() >= n {
        return Err(Error::Contract(format!(
            "partial trace must keep a nonempty proper subset of {n} qubits, got {keep:?}"
        )));
    }
    if let Some(&bad) = slots.iter().find(|&&s| s >= n) {
        return Err(Error::Layout(format!("slot {bad} outside a {n}-qubit register")));
    }
    let env: Vec<usize> = (0..n).filter(|s| !slots.contains(s)).collect();
    let kept_index = |sub: usize| spread(sub, &slots, n);
    let env_index = |sub: usize| spread(sub, &env, n);

    let dk = 1 << slots.len();
    let de = 1 << env.len();
    let amps = state.amplitudes();
    let mut rho = DMatrix::from_element(dk, dk, ZERO);
    for e in 0..de {
        let eo = env_index(e);
        for i in 0..dk {
            let ai = amps[kept_index(i) | eo];
            if ai == ZERO {
                continue;
            }
            for j in 0..dk {
                rho[(i, j)] += ai * amps[kept_index(j) | eo].conj();
            }
        }
    }
    Ok(DensityMatrix { entries: rho })
}

/// Maps bit `b` of `sub` (most significant first) onto slot `slots[b]`.
fn spread(sub: usize, slots: &[usize], n_qubits: usize) -> usize {
    let k = slots.len();
    slots
        .iter()
        .enumerate()
        .filter(|(b, _)| sub & (1 << (k - 1 - b)) != 0)
        .fold(0, |acc, (_, &s)| acc | slot_mask(s, n_qubits))
}

/// Reduced state of the named qubits.
pub fn partial_trace(state: &StateVector, keep: &[QubitId]) -> Result<DensityMatrix> {
    let slots = keep
        .iter()
        .map(|q| q.position(state.n_qubits()))
        .collect::<Result<Vec<_>>>()?;
    partial_trace_slots(state, &slots)
}

/// `−Σ λ ln λ` in nats, eigenvalues clamped to `[0, 1]`.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    entropy_of_spectrum(&rho.eigenvalues())
}

pub fn entropy_of_spectrum(eigenvalues: &[f64]) -> f64 {
    eigenvalues
        .iter()
        .map(|&l| l.clamp(0.0, 1.0))
        .filter(|&l| l > 0.0)
        .map(|l| -l * l.ln())
        .sum()
}

/// Pulls out the pure state of `keep` from a state that factorizes across
/// `keep` and its complement.
pub fn extract_factor(state: &StateVector, keep: &[usize]) -> Result<StateVector> {
    let rho = partial_trace_slots(state, keep)?;
    let purity = rho.purity();
    if (purity - 1.0).abs() > 1e-10 {
        return Err(Error::Inconsistency(format!(
            "slots {keep:?} are entangled with the rest (purity {purity})"
        )));
    }
    // Any column of a rank-one projector is proportional to the state; use the largest.
    let dk = rho.dim();
    let col = (0..dk)
        .max_by(|&a, &b| rho.get(a, a).re.total_cmp(&rho.get(b, b).re))
        .unwrap_or(0);
    let v: Vec<C64> = (0..dk).map(|r| rho.get(r, col)).collect();
    let n = dk.trailing_zeros() as usize;
    StateVector::normalized(n, v)
}
