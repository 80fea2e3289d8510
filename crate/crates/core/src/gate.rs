//! Elementary gates of the lowered circuits.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// A single- or two-qubit gate. `Rz(angle)` is `exp(-i angle Z / 2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gate<T> {
    X(usize),
    H(usize),
    S(usize),
    Sdg(usize),
    Rz { qubit: usize, angle: T },
    Cnot { control: usize, target: usize },
    Swap(usize, usize),
}

impl<T: Real> Gate<T> {
    /// Qubits the gate acts on; the second slot is `None` for single-qubit gates.
    pub fn qubits(&self) -> (usize, Option<usize>) {
        match *self {
            Gate::X(q) | Gate::H(q) | Gate::S(q) | Gate::Sdg(q) => (q, None),
            Gate::Rz { qubit, .. } => (qubit, None),
            Gate::Cnot { control, target } => (control, Some(target)),
            Gate::Swap(a, b) => (a, Some(b)),
        }
    }

    pub fn is_two_qubit(&self) -> bool {
        self.qubits().1.is_some()
    }

    pub fn inverse(&self) -> Self {
        match *self {
            Gate::S(q) => Gate::Sdg(q),
            Gate::Sdg(q) => Gate::S(q),
            Gate::Rz { qubit, angle } => Gate::Rz {
                qubit,
                angle: -angle,
            },
            other => other,
        }
    }

    /// Checks that targets are distinct and below `n_qubits`.
    pub fn validate(&self, n_qubits: usize) -> Result<()> {
        let (a, b) = self.qubits();
        if a >= n_qubits || b.is_some_and(|b| b >= n_qubits) {
            return Err(Error::argument(format!(
                "gate {self:?} addresses a qubit outside 0..{n_qubits}"
            )));
        }
        if b == Some(a) {
            return Err(Error::argument(format!(
                "gate {self:?} repeats qubit {a}"
            )));
        }
        Ok(())
    }
}
