//! Gate sequences produced by lowering an ansatz.

use crate::error::Result;
use crate::gate::Gate;
use crate::scalar::Real;
use crate::state::StateVector;

/// A gate list plus, for each parameter, the positions of the `Rz` gates
/// that carry it.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit<T> {
    pub n_qubits: usize,
    pub gates: Vec<Gate<T>>,
    pub param_slots: Vec<Vec<usize>>,
}

/// Gate counts along the longest dependency chain of a circuit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
pub struct PathCounts {
    pub single_qubit: usize,
    pub two_qubit: usize,
}

impl PathCounts {
    pub fn total(&self) -> usize {
        self.single_qubit + self.two_qubit
    }

    fn key(&self) -> (usize, usize) {
        (self.total(), self.two_qubit)
    }
}

impl<T: Real> Circuit<T> {
    pub fn new(n_qubits: usize) -> Self {
        Self {
            n_qubits,
            gates: Vec::new(),
            param_slots: Vec::new(),
        }
    }

    pub fn gate_count(&self) -> usize {
        self.gates.len()
    }

    pub fn apply(&self, state: &mut StateVector<T>) -> Result<()> {
        state.apply_gates(&self.gates)
    }

    /// Appends another circuit; its parameter slots are shifted to follow
    /// this circuit's.
    pub fn append(&mut self, other: &Circuit<T>) {
        let offset = self.gates.len();
        self.gates.extend_from_slice(&other.gates);
        self.param_slots.extend(
            other
                .param_slots
                .iter()
                .map(|slots| slots.iter().map(|p| p + offset).collect()),
        );
    }

    /// Rebinds the `Rz` angles to new parameter values.
    pub fn bind(&self, params: &[T]) -> Circuit<T> {
        let mut out = self.clone();
        for (slots, &theta) in self.param_slots.iter().zip(params) {
            for &pos in slots {
                if let Gate::Rz { angle, .. } = &mut out.gates[pos] {
                    *angle = theta;
                }
            }
        }
        out
    }

    /// Longest path through the gate dependency graph, where gates on
    /// disjoint qubits can run in parallel. Ties on length prefer the path
    /// with more two-qubit gates.
    pub fn critical_path(&self) -> PathCounts {
        let mut frontier = vec![PathCounts::default(); self.n_qubits];
        let mut best = PathCounts::default();
        for g in &self.gates {
            let (a, b) = g.qubits();
            let mut start = frontier[a];
            if let Some(b) = b {
                if frontier[b].key() > start.key() {
                    start = frontier[b];
                }
            }
            if g.is_two_qubit() {
                start.two_qubit += 1;
            } else {
                start.single_qubit += 1;
            }
            frontier[a] = start;
            if let Some(b) = b {
                frontier[b] = start;
            }
            if start.key() > best.key() {
                best = start;
            }
        }
        best
    }

    /// Number of gates on the critical path.
    pub fn depth(&self) -> usize {
        self.critical_path().total()
    }
}
