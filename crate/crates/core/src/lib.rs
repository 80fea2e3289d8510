//! State-vector emulation of variational ground-state searches for spin
//! Hamiltonians, with a quasi-dynamical evolution heuristic on top of VQE.
//!
//! Qubit `q` is bit `q` of a basis index, and bitstrings are written qubit 0
//! first. Rotations follow the half-angle convention `exp(-i theta P / 2)`.
//!
//! Most types are generic over [`Real`] (`f32` or `f64`); the aliases below
//! fix double precision.

pub mod ansatz;
pub mod circuit;
pub mod error;
pub mod evolution;
pub mod exact;
pub mod experiments;
pub mod gate;
pub mod hamiltonian;
pub mod lattice;
pub mod objective;
pub mod operator;
pub mod optimizer;
pub mod pauli;
pub mod problem;
pub mod runtime;
pub mod sampling;
pub mod scalar;
pub mod state;

pub use error::{Error, Result};
pub use scalar::Real;

pub type StateVector = state::StateVector<f64>;
pub type Hamiltonian = hamiltonian::Hamiltonian<f64>;
pub type PauliString = pauli::PauliString<f64>;
pub type PauliOperator = operator::PauliOperator<f64>;
pub type Ansatz = ansatz::Ansatz<f64>;
pub type Circuit = circuit::Circuit<f64>;
pub type Gate = gate::Gate<f64>;
pub type Problem = problem::Problem<f64>;

/// Single-precision variants.
pub mod f32 {
    pub type StateVector = crate::state::StateVector<f32>;
    pub type Hamiltonian = crate::hamiltonian::Hamiltonian<f32>;
    pub type PauliOperator = crate::operator::PauliOperator<f32>;
    pub type Ansatz = crate::ansatz::Ansatz<f32>;
}
