//! Dense state-vector engine.
//!
//! Qubit `q` is bit `q` of the basis-state index (little-endian). Bitstrings
//! in text form list qubit 0 first, so `"01"` is qubit 0 = 0, qubit 1 = 1.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::gate::Gate;
use crate::pauli::PauliAction;
use crate::scalar::{mul_i_pow, Real};

/// Largest register the dense engine will allocate.
pub const MAX_QUBITS: usize = 30;

/// Parses a bitstring (qubit 0 first) into a basis-state index.
pub fn parse_bits(bits: &str) -> Result<usize> {
    if bits.len() > usize::BITS as usize - 1 {
        return Err(Error::argument(format!("bitstring of length {} is too long", bits.len())));
    }
    bits.chars().enumerate().try_fold(0usize, |acc, (q, c)| match c {
        '0' => Ok(acc),
        '1' => Ok(acc | (1 << q)),
        other => Err(Error::argument(format!("invalid bit {other:?} in {bits:?}"))),
    })
}

/// Formats a basis-state index as a bitstring, qubit 0 first.
pub fn format_bits(index: usize, n_qubits: usize) -> String {
    (0..n_qubits)
        .map(|q| if index >> q & 1 == 1 { '1' } else { '0' })
        .collect()
}

fn check_capacity(n_qubits: usize) -> Result<()> {
    if n_qubits == 0 {
        return Err(Error::argument("a register needs at least one qubit"));
    }
    if n_qubits > MAX_QUBITS {
        return Err(Error::capacity(format!(
            "{n_qubits} qubits exceed the {MAX_QUBITS}-qubit state-vector budget"
        )));
    }
    Ok(())
}

/// Amplitudes of an `n`-qubit pure state.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector<T> {
    n_qubits: usize,
    amplitudes: Vec<Complex<T>>,
}

impl<T: Real> StateVector<T> {
    /// The computational basis state with the given index.
    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        check_capacity(n_qubits)?;
        let dim = 1usize << n_qubits;
        if index >= dim {
            return Err(Error::argument(format!("basis index {index} out of range for {n_qubits} qubits")));
        }
        let mut amplitudes = vec![Complex::new(T::zero(), T::zero()); dim];
        amplitudes[index] = Complex::new(T::one(), T::zero());
        Ok(Self { n_qubits, amplitudes })
    }

    /// Basis state from a bitstring listing qubit 0 first.
    pub fn init_basis_state(n_qubits: usize, bits: &str) -> Result<Self> {
        check_capacity(n_qubits)?;
        if bits.chars().count() != n_qubits {
            return Err(Error::argument(format!(
                "bitstring {bits:?} does not have length {n_qubits}"
            )));
        }
        Self::basis(n_qubits, parse_bits(bits)?)
    }

    /// Wraps raw amplitudes; the length must be a power of two.
    pub fn from_amplitudes(amplitudes: Vec<Complex<T>>) -> Result<Self> {
        let len = amplitudes.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::argument(format!("amplitude vector length {len} is not 2^n with n >= 1")));
        }
        let n_qubits = len.trailing_zeros() as usize;
        check_capacity(n_qubits)?;
        Ok(Self { n_qubits, amplitudes })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amplitudes
    }

    pub fn amplitudes_mut(&mut self) -> &mut [Complex<T>] {
        &mut self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex<T>> {
        self.amplitudes
    }

    pub fn norm(&self) -> T {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<T>().sqrt()
    }

    pub fn normalize(&mut self) -> Result<()> {
        let n = self.norm();
        if !(n > T::zero()) || !n.is_finite() {
            return Err(Error::argument("cannot normalize a zero or non-finite state"));
        }
        let inv = T::one() / n;
        for a in &mut self.amplitudes {
            *a = a.scale(inv);
        }
        Ok(())
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &Self) -> Complex<T> {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .fold(Complex::new(T::zero(), T::zero()), |acc, (a, b)| acc + a.conj() * b)
    }

    /// Largest elementwise distance to another state of the same size.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm())
            .fold(T::zero(), T::max)
    }

    /// Euclidean distance to another state.
    pub fn distance(&self, other: &Self) -> T {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<T>()
            .sqrt()
    }

    pub fn probabilities(&self) -> Vec<T> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    pub fn apply_gate(&mut self, gate: &Gate<T>) -> Result<()> {
        gate.validate(self.n_qubits)?;
        let amps = &mut self.amplitudes;
        match *gate {
            Gate::X(q) => {
                let m = 1usize << q;
                for b in 0..amps.len() {
                    if b & m == 0 {
                        amps.swap(b, b | m);
                    }
                }
            }
            Gate::H(q) => {
                let m = 1usize << q;
                let r = T::FRAC_1_SQRT_2();
                for b in 0..amps.len() {
                    if b & m == 0 {
                        let (a0, a1) = (amps[b], amps[b | m]);
                        amps[b] = (a0 + a1).scale(r);
                        amps[b | m] = (a0 - a1).scale(r);
                    }
                }
            }
            Gate::S(q) | Gate::Sdg(q) => {
                let m = 1usize << q;
                let power = if matches!(gate, Gate::S(_)) { 1 } else { 3 };
                for (b, a) in amps.iter_mut().enumerate() {
                    if b & m != 0 {
                        *a = mul_i_pow(*a, power);
                    }
                }
            }
            Gate::Rz { qubit, angle } => {
                let m = 1usize << qubit;
                let half = angle / T::of(2.0);
                let lower = Complex::new(half.cos(), -half.sin());
                let upper = lower.conj();
                for (b, a) in amps.iter_mut().enumerate() {
                    *a *= if b & m == 0 { lower } else { upper };
                }
            }
            Gate::Cnot { control, target } => {
                let (c, t) = (1usize << control, 1usize << target);
                for b in 0..amps.len() {
                    if b & c != 0 && b & t == 0 {
                        amps.swap(b, b | t);
                    }
                }
            }
            Gate::Swap(p, q) => {
                let (mp, mq) = (1usize << p, 1usize << q);
                for b in 0..amps.len() {
                    if b & mp != 0 && b & mq == 0 {
                        amps.swap(b, (b ^ mp) | mq);
                    }
                }
            }
        }
        Ok(())
    }

    pub fn apply_gates<'a>(&mut self, gates: impl IntoIterator<Item = &'a Gate<T>>) -> Result<()> {
        for g in gates {
            self.apply_gate(g)?;
        }
        Ok(())
    }

    /// `self <- P self`.
    pub fn apply_pauli(&mut self, action: &PauliAction) {
        let amps = &mut self.amplitudes;
        if action.flip == 0 {
            for (b, a) in amps.iter_mut().enumerate() {
                *a *= action.phase::<T>(b);
            }
            return;
        }
        let low = action.flip & action.flip.wrapping_neg();
        for b in 0..amps.len() {
            if b & low == 0 {
                let p = b ^ action.flip;
                let (ab, ap) = (amps[b], amps[p]);
                amps[p] = ab * action.phase::<T>(b);
                amps[b] = ap * action.phase::<T>(p);
            }
        }
    }

    /// `self <- exp(-i angle P / 2) self`, the same map the lowered circuit of
    /// a single Pauli generator implements.
    pub fn apply_pauli_rotation(&mut self, action: &PauliAction, angle: T) {
        let half = angle / T::of(2.0);
        let (c, s) = (half.cos(), half.sin());
        // exp(-i h P)|b> = cos h |b> - i sin h phase(b) |b ^ flip>, and the
        // -i factor folds into the power of i.
        let power = (action.y_power + 3) & 3;
        let amps = &mut self.amplitudes;
        if action.flip == 0 {
            for (b, a) in amps.iter_mut().enumerate() {
                let k = signed_i_pow::<T>(power, action.sign_of(b));
                *a = a.scale(c) + (k * *a).scale(s);
            }
            return;
        }
        let low = action.flip & action.flip.wrapping_neg();
        for b in 0..amps.len() {
            if b & low == 0 {
                let p = b ^ action.flip;
                let (ab, ap) = (amps[b], amps[p]);
                let from_b = mul_i_pow(if action.sign_of(b) { -ab } else { ab }, power);
                let from_p = mul_i_pow(if action.sign_of(p) { -ap } else { ap }, power);
                amps[b] = ab.scale(c) + from_p.scale(s);
                amps[p] = ap.scale(c) + from_b.scale(s);
            }
        }
    }
}

#[inline]
fn signed_i_pow<T: Real>(power: u8, negative: bool) -> Complex<T> {
    let one = if negative { -T::one() } else { T::one() };
    mul_i_pow(Complex::new(one, T::zero()), power)
}
