//! Pauli strings and their action on computational basis states.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{mul_i_pow, Real};
use crate::state::StateVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Pauli {
    X,
    Y,
    Z,
}

impl fmt::Display for Pauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        };
        write!(f, "{c}")
    }
}

/// Bit-mask form of a Pauli string:
/// `P|b> = i^y_power (-1)^popcount(b & sign) |b ^ flip>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PauliAction {
    pub flip: usize,
    pub sign: usize,
    pub y_power: u8,
}

impl PauliAction {
    /// Phase picked up by basis state `b`.
    #[inline]
    pub fn phase<T: Real>(&self, b: usize) -> Complex<T> {
        let odd = (b & self.sign).count_ones() & 1 == 1;
        let base = if odd {
            Complex::new(-T::one(), T::zero())
        } else {
            Complex::new(T::one(), T::zero())
        };
        mul_i_pow(base, self.y_power)
    }

    #[inline]
    pub(crate) fn sign_of(&self, b: usize) -> bool {
        (b & self.sign).count_ones() & 1 == 1
    }

    pub fn is_diagonal(&self) -> bool {
        self.flip == 0
    }
}

/// A weighted tensor product of single-qubit Pauli operators; identity on
/// qubits that carry no factor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PauliString<T> {
    factors: BTreeMap<usize, Pauli>,
    pub coefficient: T,
}

impl<T: Real> PauliString<T> {
    pub fn new(coefficient: T, factors: impl IntoIterator<Item = (usize, Pauli)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (q, p) in factors {
            if map.insert(q, p).is_some() {
                return Err(Error::argument(format!("qubit {q} appears twice in Pauli string")));
            }
        }
        if map.is_empty() {
            return Err(Error::argument("Pauli string has no factors"));
        }
        Ok(Self {
            factors: map,
            coefficient,
        })
    }

    /// `coefficient * P_i P_j` for the same axis on two distinct qubits.
    pub fn pair(coefficient: T, axis: Pauli, i: usize, j: usize) -> Result<Self> {
        Self::new(coefficient, [(i, axis), (j, axis)])
    }

    pub fn factors(&self) -> &BTreeMap<usize, Pauli> {
        &self.factors
    }

    pub fn weight(&self) -> usize {
        self.factors.len()
    }

    /// Sorted qubit support.
    pub fn qubits(&self) -> Vec<usize> {
        self.factors.keys().copied().collect()
    }

    pub fn max_qubit(&self) -> usize {
        *self.factors.keys().next_back().expect("non-empty")
    }

    /// The common axis when every factor is the same Pauli.
    pub fn single_axis(&self) -> Option<Pauli> {
        let mut it = self.factors.values();
        let first = *it.next()?;
        it.all(|p| *p == first).then_some(first)
    }

    pub fn action(&self) -> PauliAction {
        let mut flip = 0usize;
        let mut sign = 0usize;
        let mut y_power = 0u8;
        for (&q, &p) in &self.factors {
            let bit = 1usize << q;
            match p {
                Pauli::X => flip |= bit,
                Pauli::Y => {
                    flip |= bit;
                    sign |= bit;
                    y_power = (y_power + 1) & 3;
                }
                Pauli::Z => sign |= bit,
            }
        }
        PauliAction {
            flip,
            sign,
            y_power,
        }
    }

    pub fn check_range(&self, n_qubits: usize) -> Result<()> {
        if self.max_qubit() >= n_qubits {
            return Err(Error::argument(format!(
                "Pauli string {self} addresses qubit {} of a {n_qubits}-qubit register",
                self.max_qubit()
            )));
        }
        Ok(())
    }

    /// Same operator with a different weight.
    pub fn with_coefficient(&self, coefficient: T) -> Self {
        Self {
            factors: self.factors.clone(),
            coefficient,
        }
    }
}

impl<T: Real> fmt::Display for PauliString<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.coefficient)?;
        for (q, p) in &self.factors {
            write!(f, " {p}{q}")?;
        }
        Ok(())
    }
}

/// `<bra|P|ket>` for raw amplitude slices of equal length.
pub fn matrix_element<T: Real>(bra: &[Complex<T>], action: &PauliAction, ket: &[Complex<T>]) -> Complex<T> {
    let mut acc_plus = Complex::new(T::zero(), T::zero());
    let mut acc_minus = Complex::new(T::zero(), T::zero());
    for (b, &a) in ket.iter().enumerate() {
        let v = bra[b ^ action.flip].conj() * a;
        if action.sign_of(b) {
            acc_minus += v;
        } else {
            acc_plus += v;
        }
    }
    mul_i_pow(acc_plus - acc_minus, action.y_power)
}

/// `<psi|P|psi>` without the coefficient. Hermitian `P` makes this real up to
/// rounding; the imaginary part is returned for diagnostics.
pub fn expectation_unweighted<T: Real>(state: &StateVector<T>, action: &PauliAction) -> Complex<T> {
    matrix_element(state.amplitudes(), action, state.amplitudes())
}

/// `coefficient * <psi|P|psi>`.
pub fn expectation<T: Real>(state: &StateVector<T>, term: &PauliString<T>) -> Result<T> {
    term.check_range(state.n_qubits())?;
    Ok(term.coefficient * expectation_unweighted(state, &term.action()).re)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn duplicate_or_empty_factors_rejected() {
        assert!(PauliString::new(1.0, [(0, Pauli::X), (0, Pauli::Y)]).is_err());
        assert!(PauliString::<f64>::new(1.0, []).is_err());
    }

    #[test]
    fn action_masks() {
        let p = PauliString::new(1.0, [(0, Pauli::Y), (1, Pauli::X), (3, Pauli::Z)]).unwrap();
        let a = p.action();
        assert_eq!(a.flip, 0b0011);
        assert_eq!(a.sign, 0b1001);
        assert_eq!(a.y_power, 1);
        assert_eq!(p.single_axis(), None);
        assert_eq!(PauliString::pair(2.0, Pauli::Z, 1, 4).unwrap().single_axis(), Some(Pauli::Z));
    }

    #[test]
    fn z_on_zero_is_plus_one() {
        let s = StateVector::<f64>::init_basis_state(1, "0").unwrap();
        let z = PauliString::new(1.0, [(0, Pauli::Z)]).unwrap();
        assert_eq!(expectation(&s, &z).unwrap(), 1.0);
    }

    #[test]
    fn neel_pair_zz_is_minus_one() {
        let s = StateVector::<f64>::init_basis_state(2, "01").unwrap();
        let zz = PauliString::pair(1.0, Pauli::Z, 0, 1).unwrap();
        assert_eq!(expectation(&s, &zz).unwrap(), -1.0);
    }

    #[test]
    fn singlet_heisenberg_bond_is_minus_three() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        // |01> - |10> with qubit 0 the least-significant bit: index 2 is q1=1.
        let amps = vec![
            Complex::new(0.0, 0.0),
            Complex::new(-h, 0.0),
            Complex::new(h, 0.0),
            Complex::new(0.0, 0.0),
        ];
        let s = StateVector::from_amplitudes(amps).unwrap();
        let total: f64 = [Pauli::X, Pauli::Y, Pauli::Z]
            .into_iter()
            .map(|ax| expectation(&s, &PauliString::pair(1.0, ax, 0, 1).unwrap()).unwrap())
            .sum();
        assert!((total + 3.0).abs() < 1e-12);
    }

    #[test]
    fn out_of_range_term_is_an_error() {
        let s = StateVector::<f64>::init_basis_state(2, "00").unwrap();
        let t = PauliString::pair(1.0, Pauli::Z, 0, 2).unwrap();
        assert!(matches!(expectation(&s, &t), Err(Error::Argument(_))));
    }
}
