use std::fmt;

use crate::error::{Error, Result};

/// Particle labels. `P` is the system qubit, `A1..A3` the meters and `R` the
/// spectator used for swapping.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum QubitId {
    R,
    P,
    A1,
    A2,
    A3,
}

impl QubitId {
    /// Meter qubit tracking the `i`-th Pauli component (1-based).
    pub fn meter(i: usize) -> Result<Self> {
        match i {
            1 => Ok(QubitId::A1),
            2 => Ok(QubitId::A2),
            3 => Ok(QubitId::A3),
            _ => Err(Error::Layout(format!("meter index {i} outside 1..=3"))),
        }
    }

    /// Tensor slot of this qubit for an `n_qubits` register, slot 0 being the
    /// most significant bit of the basis index.
    ///
    /// Layouts: 1 = `P`; 4 = `P A1 A2 A3`; 5 = `R P A1 A2 A3`.
    pub fn position(self, n_qubits: usize) -> Result<usize> {
        let pos = match (n_qubits, self) {
            (1, QubitId::P) => Some(0),
            (4, QubitId::P) => Some(0),
            (4, QubitId::A1) => Some(1),
            (4, QubitId::A2) => Some(2),
            (4, QubitId::A3) => Some(3),
            (5, QubitId::R) => Some(0),
            (5, QubitId::P) => Some(1),
            (5, QubitId::A1) => Some(2),
            (5, QubitId::A2) => Some(3),
            (5, QubitId::A3) => Some(4),
            _ => None,
        };
        pos.ok_or_else(|| Error::Layout(format!("{self} has no slot in a {n_qubits}-qubit layout")))
    }

    /// All qubits present in the `n_qubits` layout, in tensor order.
    pub fn layout(n_qubits: usize) -> Result<&'static [QubitId]> {
        match n_qubits {
            1 => Ok(&[QubitId::P]),
            4 => Ok(&[QubitId::P, QubitId::A1, QubitId::A2, QubitId::A3]),
            5 => Ok(&[QubitId::R, QubitId::P, QubitId::A1, QubitId::A2, QubitId::A3]),
            _ => Err(Error::Layout(format!("no named layout with {n_qubits} qubits"))),
        }
    }
}

impl fmt::Display for QubitId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            QubitId::R => "R",
            QubitId::P => "P",
            QubitId::A1 => "A1",
            QubitId::A2 => "A2",
            QubitId::A3 => "A3",
        };
        f.write_str(s)
    }
}

/// Bit mask of tensor slot `pos` within an `n_qubits` basis index.
#[inline]
pub(crate) fn slot_mask(pos: usize, n_qubits: usize) -> usize {
    1 << (n_qubits - 1 - pos)
}
