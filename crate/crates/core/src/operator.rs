//! Hamiltonians compiled into flip-mask blocks for fast expectation values
//! and matrix-free products.

use std::collections::BTreeMap;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::hamiltonian::Hamiltonian;
use crate::scalar::{mul_i_pow, Real};
use crate::state::StateVector;

/// Registers up to this size keep the diagonal part as a dense vector.
const DENSE_DIAGONAL_MAX_QUBITS: usize = 22;

#[derive(Debug, Clone)]
struct Block<T> {
    flip: usize,
    /// `(sign mask, c * i^y)` per term sharing this flip mask.
    entries: Vec<(usize, Complex<T>)>,
}

impl<T: Real> Block<T> {
    #[inline]
    fn weight(&self, b: usize) -> Complex<T> {
        let mut w = Complex::new(T::zero(), T::zero());
        for &(sign, c) in &self.entries {
            if (b & sign).count_ones() & 1 == 1 {
                w -= c;
            } else {
                w += c;
            }
        }
        w
    }
}

#[derive(Debug, Clone)]
enum Diagonal<T> {
    Dense(Vec<T>),
    Terms(Vec<(usize, T)>),
}

/// `H` grouped by the bits each term flips. The flip-free block is the
/// diagonal.
#[derive(Debug, Clone)]
pub struct PauliOperator<T> {
    n_qubits: usize,
    diagonal: Diagonal<T>,
    blocks: Vec<Block<T>>,
}

impl<T: Real> PauliOperator<T> {
    pub fn new(h: &Hamiltonian<T>) -> Self {
        let mut by_flip: BTreeMap<usize, Vec<(usize, Complex<T>)>> = BTreeMap::new();
        for term in h.terms() {
            let a = term.action();
            let c = mul_i_pow(Complex::new(term.coefficient, T::zero()), a.y_power);
            by_flip.entry(a.flip).or_default().push((a.sign, c));
        }
        let diag_terms: Vec<(usize, T)> = by_flip
            .remove(&0)
            .unwrap_or_default()
            .into_iter()
            .map(|(s, c)| (s, c.re))
            .collect();
        let n = h.n_qubits();
        let diagonal = if n <= DENSE_DIAGONAL_MAX_QUBITS {
            let d = (0..1usize << n)
                .map(|b| diagonal_value(&diag_terms, b))
                .collect();
            Diagonal::Dense(d)
        } else {
            Diagonal::Terms(diag_terms)
        };
        let blocks = by_flip
            .into_iter()
            .map(|(flip, entries)| Block { flip, entries })
            .collect();
        Self {
            n_qubits: n,
            diagonal,
            blocks,
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }

    /// Diagonal matrix element `<b|H|b>`.
    #[inline]
    pub fn diagonal_element(&self, b: usize) -> T {
        match &self.diagonal {
            Diagonal::Dense(d) => d[b],
            Diagonal::Terms(t) => diagonal_value(t, b),
        }
    }

    /// Off-diagonal structure: `H|b> = diag(b)|b> + sum_k w_k(b) |b ^ flip_k>`.
    pub fn off_diagonal(&self, b: usize) -> impl Iterator<Item = (usize, Complex<T>)> + '_ {
        self.blocks.iter().map(move |blk| (b ^ blk.flip, blk.weight(b)))
    }

    /// `true` when every matrix element is real.
    pub fn is_real(&self) -> bool {
        self.blocks
            .iter()
            .all(|blk| blk.entries.iter().all(|(_, c)| c.im == T::zero()))
    }

    /// `(flip mask, weight)` pairs with `H|b> = diag(b)|b> + sum w(b)|b ^ flip>`.
    pub(crate) fn blocks(&self) -> impl Iterator<Item = (usize, impl Fn(usize) -> Complex<T> + '_)> + '_ {
        self.blocks.iter().map(|blk| (blk.flip, move |b| blk.weight(b)))
    }

    /// `true` when `H` commutes with the total `Z` magnetization, so every
    /// off-diagonal element joins basis states of equal popcount.
    pub fn conserves_magnetization(&self) -> bool {
        let eps = T::of(1e-12);
        self.blocks.iter().all(|blk| {
            let k = blk.flip.count_ones();
            let mut sub = blk.flip;
            loop {
                if 2 * sub.count_ones() != k {
                    let mut by_outer: BTreeMap<usize, Complex<T>> = BTreeMap::new();
                    for &(sign, c) in &blk.entries {
                        let v = if (sub & sign).count_ones() & 1 == 1 { -c } else { c };
                        *by_outer.entry(sign & !blk.flip).or_insert(Complex::new(T::zero(), T::zero())) += v;
                    }
                    if by_outer.values().any(|v| v.norm() > eps) {
                        return false;
                    }
                }
                if sub == 0 {
                    break true;
                }
                sub = (sub - 1) & blk.flip;
            }
        })
    }

    fn check(&self, state: &StateVector<T>) -> Result<()> {
        if state.n_qubits() != self.n_qubits {
            return Err(Error::argument(format!(
                "state has {} qubits, operator {}",
                state.n_qubits(),
                self.n_qubits
            )));
        }
        Ok(())
    }

    /// `<psi|H|psi>` as a complex number; the imaginary part is rounding.
    pub fn expectation_complex(&self, state: &StateVector<T>) -> Result<Complex<T>> {
        self.check(state)?;
        Ok(self.expectation_of(state.amplitudes()))
    }

    pub fn expectation(&self, state: &StateVector<T>) -> Result<T> {
        Ok(self.expectation_complex(state)?.re)
    }

    pub(crate) fn expectation_of(&self, amps: &[Complex<T>]) -> Complex<T> {
        let mut diag = T::zero();
        for (b, a) in amps.iter().enumerate() {
            diag += self.diagonal_element(b) * a.norm_sqr();
        }
        let mut total = Complex::new(diag, T::zero());
        for blk in &self.blocks {
            let mut acc = Complex::new(T::zero(), T::zero());
            for (b, a) in amps.iter().enumerate() {
                acc += amps[b ^ blk.flip].conj() * *a * blk.weight(b);
            }
            total += acc;
        }
        total
    }

    /// `out <- H x`.
    pub fn apply(&self, x: &[Complex<T>], out: &mut [Complex<T>]) {
        debug_assert_eq!(x.len(), self.dim());
        debug_assert_eq!(out.len(), self.dim());
        for (b, (o, a)) in out.iter_mut().zip(x).enumerate() {
            *o = a.scale(self.diagonal_element(b));
        }
        for blk in &self.blocks {
            for (b, a) in x.iter().enumerate() {
                out[b ^ blk.flip] += *a * blk.weight(b);
            }
        }
    }

    pub fn apply_to_state(&self, state: &StateVector<T>) -> Result<StateVector<T>> {
        self.check(state)?;
        let mut out = vec![Complex::new(T::zero(), T::zero()); state.dim()];
        self.apply(state.amplitudes(), &mut out);
        StateVector::from_amplitudes(out)
    }
}

#[inline]
fn diagonal_value<T: Real>(terms: &[(usize, T)], b: usize) -> T {
    terms.iter().fold(T::zero(), |acc, &(sign, c)| {
        if (b & sign).count_ones() & 1 == 1 {
            acc - c
        } else {
            acc + c
        }
    })
}
