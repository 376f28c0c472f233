//! Dense complex operators and the Pauli algebra on named qubit slots.

use std::ops::{Add, Index, Mul, Sub};

use nalgebra::{Complex, DMatrix};

use crate::error::{Error, Result};
use crate::qubit::{slot_mask, QubitId};

pub type C64 = Complex<f64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Tolerance for tagging an operator Hermitian or unitary (max entry deviation).
pub const OPERATOR_TOL: f64 = 1e-12;

/// Pauli axis, numbered 1, 2, 3 for x, y, z.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn index(self) -> usize {
        match self {
            Axis::X => 1,
            Axis::Y => 2,
            Axis::Z => 3,
        }
    }

    pub fn from_index(i: usize) -> Result<Self> {
        match i {
            1 => Ok(Axis::X),
            2 => Ok(Axis::Y),
            3 => Ok(Axis::Z),
            _ => Err(Error::Layout(format!("Pauli axis index {i} outside 1..=3"))),
        }
    }
}

/// Totally antisymmetric symbol on 1-based indices with `eps(1,2,3) = +1`.
pub fn levi_civita(i: usize, j: usize, k: usize) -> i8 {
    match (i, j, k) {
        (1, 2, 3) | (2, 3, 1) | (3, 1, 2) => 1,
        (3, 2, 1) | (1, 3, 2) | (2, 1, 3) => -1,
        _ => 0,
    }
}

/// A square complex matrix acting on a register of qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseOperator {
    entries: DMatrix<C64>,
}

impl DenseOperator {
    pub fn from_matrix(entries: DMatrix<C64>) -> Result<Self> {
        let (r, c) = entries.shape();
        if r != c || !r.is_power_of_two() {
            return Err(Error::Layout(format!("operator shape {r}x{c} is not a square power of two")));
        }
        Ok(DenseOperator { entries })
    }

    /// Builds a 2x2 operator from rows.
    pub fn from_rows_2x2(rows: [[C64; 2]; 2]) -> Self {
        DenseOperator {
            entries: DMatrix::from_row_slice(2, 2, &[rows[0][0], rows[0][1], rows[1][0], rows[1][1]]),
        }
    }

    pub fn identity(dim: usize) -> Self {
        DenseOperator { entries: DMatrix::identity(dim, dim) }
    }

    pub fn zeros(dim: usize) -> Self {
        DenseOperator { entries: DMatrix::zeros(dim, dim) }
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn n_qubits(&self) -> usize {
        self.dim().trailing_zeros() as usize
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.entries
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.entries
    }

    pub fn adjoint(&self) -> Self {
        DenseOperator { entries: self.entries.adjoint() }
    }

    pub fn scale(&self, factor: C64) -> Self {
        DenseOperator { entries: &self.entries * factor }
    }

    pub fn scale_real(&self, factor: f64) -> Self {
        self.scale(C64::new(factor, 0.0))
    }

    pub fn trace(&self) -> C64 {
        self.entries.trace()
    }

    /// Kronecker product `self ⊗ other`; `self` occupies the more significant slots.
    pub fn kron(&self, other: &DenseOperator) -> Self {
        DenseOperator { entries: self.entries.kronecker(&other.entries) }
    }

    /// Largest absolute entry of `self - other`.
    pub fn max_abs_diff(&self, other: &DenseOperator) -> f64 {
        assert_eq!(self.dim(), other.dim(), "operator dimension mismatch");
        self.entries
            .iter()
            .zip(other.entries.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `max |A - A†|`.
    pub fn hermiticity_defect(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    /// `max |U†U - 1|`.
    pub fn unitarity_defect(&self) -> f64 {
        (&self.adjoint() * self).max_abs_diff(&DenseOperator::identity(self.dim()))
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermiticity_defect() < OPERATOR_TOL
    }

    pub fn is_unitary(&self) -> bool {
        self.unitarity_defect() < OPERATOR_TOL
    }
}

impl Index<(usize, usize)> for DenseOperator {
    type Output = C64;

    fn index(&self, idx: (usize, usize)) -> &C64 {
        &self.entries[idx]
    }
}

impl Mul for &DenseOperator {
    type Output = DenseOperator;

    fn mul(self, rhs: &DenseOperator) -> DenseOperator {
        DenseOperator { entries: &self.entries * &rhs.entries }
    }
}

impl Add for &DenseOperator {
    type Output = DenseOperator;

    fn add(self, rhs: &DenseOperator) -> DenseOperator {
        DenseOperator { entries: &self.entries + &rhs.entries }
    }
}

impl Sub for &DenseOperator {
    type Output = DenseOperator;

    fn sub(self, rhs: &DenseOperator) -> DenseOperator {
        DenseOperator { entries: &self.entries - &rhs.entries }
    }
}

/// Single-qubit Pauli matrix.
pub fn pauli(axis: Axis) -> DenseOperator {
    match axis {
        Axis::X => DenseOperator::from_rows_2x2([[ZERO, ONE], [ONE, ZERO]]),
        Axis::Y => DenseOperator::from_rows_2x2([[ZERO, -I], [I, ZERO]]),
        Axis::Z => DenseOperator::from_rows_2x2([[ONE, ZERO], [ZERO, -ONE]]),
    }
}

/// Embeds a single-qubit operator at tensor slot `pos` of an `n_qubits` register,
/// identity elsewhere.
pub fn embed(single: &DenseOperator, pos: usize, n_qubits: usize) -> Result<DenseOperator> {
    if single.dim() != 2 {
        return Err(Error::Layout(format!("expected a 2x2 operator, got {0}x{0}", single.dim())));
    }
    if pos >= n_qubits {
        return Err(Error::Layout(format!("slot {pos} outside a {n_qubits}-qubit register")));
    }
    let dim = 1usize << n_qubits;
    let mask = slot_mask(pos, n_qubits);
    let mut m = DMatrix::zeros(dim, dim);
    for col in 0..dim {
        let cb = usize::from(col & mask != 0);
        for rb in 0..2 {
            let v = single[(rb, cb)];
            if v != ZERO {
                let row = if rb == 1 { col | mask } else { col & !mask };
                m[(row, col)] = v;
            }
        }
    }
    Ok(DenseOperator { entries: m })
}

/// `σ_axis` on `target`, identity on every other qubit of the `n_qubits` layout.
pub fn pauli_on(target: QubitId, axis: Axis, n_qubits: usize) -> Result<DenseOperator> {
    embed(&pauli(axis), target.position(n_qubits)?, n_qubits)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pauli_commutator() {
        let x = pauli_on(QubitId::P, Axis::X, 4).unwrap();
        let y = pauli_on(QubitId::P, Axis::Y, 4).unwrap();
        let z = pauli_on(QubitId::P, Axis::Z, 4).unwrap();
        let comm = &(&x * &y) - &(&y * &x);
        assert!(comm.max_abs_diff(&z.scale(I * 2.0)) < 1e-15);
    }

    #[test]
    fn embedded_paulis_are_hermitian_unitary_involutions() {
        for n in [1, 4, 5] {
            for &q in QubitId::layout(n).unwrap() {
                for axis in Axis::ALL {
                    let p = pauli_on(q, axis, n).unwrap();
                    assert!(p.is_hermitian() && p.is_unitary());
                    assert!((&p * &p).max_abs_diff(&DenseOperator::identity(1 << n)) < 1e-12);
                }
            }
        }
    }

    #[test]
    fn embed_matches_kron() {
        let y = pauli(Axis::Y);
        let id2 = DenseOperator::identity(2);
        let expected = id2.kron(&y).kron(&id2).kron(&id2);
        let got = pauli_on(QubitId::A1, Axis::Y, 4).unwrap();
        assert_eq!(got.max_abs_diff(&expected), 0.0);
    }

    #[test]
    fn unknown_target_is_layout_error() {
        assert!(matches!(pauli_on(QubitId::R, Axis::X, 4), Err(Error::Layout(_))));
        assert!(embed(&DenseOperator::identity(4), 0, 2).is_err());
    }

    #[test]
    fn epsilon_table() {
        assert_eq!(levi_civita(1, 2, 3), 1);
        assert_eq!(levi_civita(2, 1, 3), -1);
        assert_eq!(levi_civita(1, 1, 3), 0);
        let mut sum = 0;
        for i in 1..=3 {
            for j in 1..=3 {
                for k in 1..=3 {
                    sum += levi_civita(i, j, k) as i32 * levi_civita(i, j, k) as i32;
                }
            }
        }
        assert_eq!(sum, 6);
    }
}
