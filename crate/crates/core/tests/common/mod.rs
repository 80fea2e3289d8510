#![allow(dead_code)]

use num_complex::Complex;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use vqevo_core::{Gate, StateVector};

pub fn random_state(n: usize, seed: u64) -> StateVector {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let amps = (0..1usize << n)
        .map(|_| Complex::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
        .collect();
    let mut s = StateVector::from_amplitudes(amps).unwrap();
    s.normalize().unwrap();
    s
}

/// Any gate on `n >= 2` qubits.
pub fn gate(n: usize) -> impl Strategy<Value = Gate> {
    let q = 0..n;
    let pair = (0..n, 1..n).prop_map(move |(a, d)| (a, (a + d) % n));
    prop_oneof![
        q.clone().prop_map(Gate::X),
        q.clone().prop_map(Gate::H),
        q.clone().prop_map(Gate::S),
        q.clone().prop_map(Gate::Sdg),
        (q, -10.0..10.0f64).prop_map(|(qubit, angle)| Gate::Rz { qubit, angle }),
        pair.clone().prop_map(|(control, target)| Gate::Cnot { control, target }),
        pair.prop_map(|(a, b)| Gate::Swap(a, b)),
    ]
}

/// Dense 2^n x 2^n matrix of a Pauli string, built from Kronecker products.
pub fn pauli_matrix(n: usize, factors: &[(usize, vqevo_core::pauli::Pauli)]) -> nalgebra::DMatrix<Complex<f64>> {
    use vqevo_core::pauli::Pauli;
    let c = |re: f64, im: f64| Complex::new(re, im);
    let single = |p: Option<Pauli>| -> nalgebra::DMatrix<Complex<f64>> {
        let v = match p {
            None => [c(1., 0.), c(0., 0.), c(0., 0.), c(1., 0.)],
            Some(Pauli::X) => [c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)],
            Some(Pauli::Y) => [c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)],
            Some(Pauli::Z) => [c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.)],
        };
        nalgebra::DMatrix::from_row_slice(2, 2, &v)
    };
    // Qubit 0 is the least significant bit, so it is the rightmost factor.
    let mut m = nalgebra::DMatrix::from_element(1, 1, c(1., 0.));
    for q in (0..n).rev() {
        let p = factors.iter().find(|(k, _)| *k == q).map(|&(_, p)| p);
        m = m.kronecker(&single(p));
    }
    m
}

pub fn to_vector(s: &StateVector) -> nalgebra::DVector<Complex<f64>> {
    nalgebra::DVector::from_column_slice(s.amplitudes())
}
