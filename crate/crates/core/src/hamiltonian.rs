//! Spin Hamiltonians as weighted Pauli sums, Néel reference states and
//! measurement groupings.

use std::collections::VecDeque;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::pauli::{expectation_unweighted, Pauli, PauliString};
use crate::scalar::Real;
use crate::state::StateVector;

/// `H = sum_k c_k P_k` over an `n_qubits` register.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Hamiltonian<T> {
    n_qubits: usize,
    terms: Vec<PauliString<T>>,
}

impl<T: Real> Hamiltonian<T> {
    pub fn new(n_qubits: usize, terms: Vec<PauliString<T>>) -> Result<Self> {
        for t in &terms {
            t.check_range(n_qubits)?;
        }
        Ok(Self { n_qubits, terms })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn terms(&self) -> &[PauliString<T>] {
        &self.terms
    }

    /// `<psi|H|psi>`, summed termwise.
    pub fn expectation(&self, state: &StateVector<T>) -> Result<T> {
        if state.n_qubits() != self.n_qubits {
            return Err(Error::argument(format!(
                "state has {} qubits, Hamiltonian {}",
                state.n_qubits(),
                self.n_qubits
            )));
        }
        Ok(self
            .terms
            .iter()
            .map(|t| t.coefficient * expectation_unweighted(state, &t.action()).re)
            .sum())
    }

    /// Energy of a computational basis state (diagonal terms only contribute).
    pub fn basis_energy(&self, index: usize) -> T {
        self.terms
            .iter()
            .map(|t| t.action())
            .zip(&self.terms)
            .filter(|(a, _)| a.is_diagonal())
            .map(|(a, t)| {
                let p = a.phase::<T>(index);
                t.coefficient * p.re
            })
            .sum()
    }
}

/// `J (X_i X_j + Y_i Y_j + Z_i Z_j)` on every bond.
pub fn build_heisenberg<T: Real>(lattice: &Lattice, coupling: T) -> Hamiltonian<T> {
    let mut terms = Vec::with_capacity(3 * lattice.bonds().len());
    for &(i, j) in lattice.bonds() {
        for axis in [Pauli::X, Pauli::Y, Pauli::Z] {
            terms.push(PauliString::pair(coupling, axis, i, j).expect("distinct sites"));
        }
    }
    Hamiltonian {
        n_qubits: lattice.n_sites(),
        terms,
    }
}

/// Unit isotropic couplings between every pair of `n` spins.
pub fn build_mean_field<T: Real>(n: usize) -> Result<Hamiltonian<T>> {
    if n < 2 {
        return Err(Error::argument("mean-field model needs at least two spins"));
    }
    let terms = all_pair_candidates(n)
        .map(|(axis, i, j)| PauliString::pair(T::one(), axis, i, j).expect("distinct sites"))
        .collect();
    Ok(Hamiltonian { n_qubits: n, terms })
}

fn all_pair_candidates(n: usize) -> impl Iterator<Item = (Pauli, usize, usize)> {
    (0..n).flat_map(move |i| {
        (i + 1..n).flat_map(move |j| [Pauli::X, Pauli::Y, Pauli::Z].map(|axis| (axis, i, j)))
    })
}

/// Random all-pairs Hamiltonian: a uniform third of the `3 C(n,2)` single-axis
/// pair terms, each with an independent coefficient uniform in `(0, 10)`.
/// Terms keep the candidate enumeration order.
pub fn build_random_hamiltonian<T: Real>(n: usize, seed: u64) -> Result<Hamiltonian<T>> {
    if n < 2 {
        return Err(Error::argument("random Hamiltonian needs at least two spins"));
    }
    let candidates: Vec<_> = all_pair_candidates(n).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut picked = sample(&mut rng, candidates.len(), candidates.len() / 3).into_vec();
    picked.sort_unstable();
    let terms = picked
        .into_iter()
        .map(|k| {
            let (axis, i, j) = candidates[k];
            let coefficient = loop {
                let v: f64 = rng.gen::<f64>() * 10.0;
                if v > 0.0 && v < 10.0 {
                    break v;
                }
            };
            PauliString::pair(T::of(coefficient), axis, i, j).expect("distinct sites")
        })
        .collect();
    Ok(Hamiltonian { n_qubits: n, terms })
}

/// Two-colours the bond graph (site 0 gets bit 0) and returns the Néel
/// bitstring, qubit 0 first, together with the prepared basis state.
pub fn neel_state<T: Real>(lattice: &Lattice) -> Result<(String, StateVector<T>)> {
    let text = neel_bits(lattice)?;
    let state = StateVector::init_basis_state(lattice.n_sites(), &text)?;
    Ok((text, state))
}

/// The Néel bitstring alone, for lattices too large to simulate.
pub fn neel_bits(lattice: &Lattice) -> Result<String> {
    let bits = two_colouring(lattice.n_sites(), lattice.bonds())?;
    Ok(bits.iter().map(|&b| if b { '1' } else { '0' }).collect())
}

/// Alternating `0101...` pattern (qubit 0 first), the reference state used for
/// all-pairs Hamiltonians where no bipartite colouring exists.
pub fn alternating_bits(n: usize) -> String {
    (0..n).map(|q| if q % 2 == 1 { '1' } else { '0' }).collect()
}

fn two_colouring(n: usize, bonds: &[(usize, usize)]) -> Result<Vec<bool>> {
    let mut adj = vec![Vec::new(); n];
    for &(i, j) in bonds {
        adj[i].push(j);
        adj[j].push(i);
    }
    let mut colour: Vec<Option<bool>> = vec![None; n];
    let mut parent = vec![usize::MAX; n];
    for start in 0..n {
        if colour[start].is_some() {
            continue;
        }
        colour[start] = Some(false);
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            let cu = colour[u].expect("queued sites are coloured");
            for &v in &adj[u] {
                match colour[v] {
                    None => {
                        colour[v] = Some(!cu);
                        parent[v] = u;
                        queue.push_back(v);
                    }
                    Some(cv) if cv == cu => {
                        return Err(Error::NotBipartite {
                            cycle: odd_cycle(&parent, u, v),
                        });
                    }
                    Some(_) => {}
                }
            }
        }
    }
    Ok(colour.into_iter().map(|c| c.expect("all sites visited")).collect())
}

/// Closes the BFS-tree paths from `u` and `v` at their common ancestor.
fn odd_cycle(parent: &[usize], u: usize, v: usize) -> Vec<usize> {
    let path = |mut x: usize| {
        let mut p = vec![x];
        while parent[x] != usize::MAX {
            x = parent[x];
            p.push(x);
        }
        p
    };
    let (pu, pv) = (path(u), path(v));
    let common = pu.iter().find(|x| pv.contains(x)).copied().expect("same BFS tree");
    let mut cycle: Vec<usize> = pu.iter().copied().take_while(|&x| x != common).collect();
    cycle.push(common);
    let back: Vec<usize> = pv.iter().copied().take_while(|&x| x != common).collect();
    cycle.extend(back.into_iter().rev());
    cycle
}

/// Terms that can be read out together after one layer of single-qubit basis
/// rotations. Qubits a group does not touch are measured in `Z`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeasurementGroup {
    pub basis: Vec<Pauli>,
    pub members: Vec<usize>,
}

/// Partitions the terms into qubit-wise commuting groups. Hamiltonians made
/// only of single-axis strings get one group per axis; anything else is
/// packed first-fit in term order.
pub fn group_terms<T: Real>(h: &Hamiltonian<T>) -> Vec<MeasurementGroup> {
    let n = h.n_qubits();
    if let Some(axes) = h.terms().iter().map(|t| t.single_axis()).collect::<Option<Vec<_>>>() {
        return [Pauli::X, Pauli::Y, Pauli::Z]
            .into_iter()
            .filter_map(|axis| {
                let members: Vec<usize> = (0..axes.len()).filter(|&k| axes[k] == axis).collect();
                (!members.is_empty()).then(|| MeasurementGroup {
                    basis: vec![axis; n],
                    members,
                })
            })
            .collect();
    }
    let mut partial: Vec<(Vec<Option<Pauli>>, Vec<usize>)> = Vec::new();
    for (k, term) in h.terms().iter().enumerate() {
        let slot = partial.iter_mut().find(|(basis, _)| {
            term.factors()
                .iter()
                .all(|(&q, &p)| basis[q].is_none_or(|b| b == p))
        });
        let (basis, members) = match slot {
            Some(s) => s,
            None => {
                partial.push((vec![None; n], Vec::new()));
                partial.last_mut().expect("just pushed")
            }
        };
        for (&q, &p) in term.factors() {
            basis[q] = Some(p);
        }
        members.push(k);
    }
    partial
        .into_iter()
        .map(|(basis, members)| MeasurementGroup {
            basis: basis.into_iter().map(|b| b.unwrap_or(Pauli::Z)).collect(),
            members,
        })
        .collect()
}
