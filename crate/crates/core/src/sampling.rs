//! Finite-shot readout: computational-basis sampling, grouped energy
//! estimates from bit parities, and distinct-outcome counts.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gate::Gate;
use crate::hamiltonian::{group_terms, Hamiltonian, MeasurementGroup};
use crate::pauli::Pauli;
use crate::scalar::Real;
use crate::state::StateVector;

/// How a shot budget is distributed over measurement groups.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "convention", content = "shots", rename_all = "kebab-case")]
pub enum ShotBudget {
    /// Every group receives this many shots.
    PerGroup(usize),
    /// This many shots in total, split evenly (remainder dropped).
    TotalSplit(usize),
}

impl ShotBudget {
    pub fn shots_per_group(&self, groups: usize) -> Result<usize> {
        let shots = match *self {
            ShotBudget::PerGroup(s) => s,
            ShotBudget::TotalSplit(total) => total / groups.max(1),
        };
        if shots == 0 {
            return Err(Error::argument(format!("{self:?} leaves no shots for {groups} groups")));
        }
        Ok(shots)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampledEstimate {
    pub energy: f64,
    pub shots_per_group: usize,
    pub groups: usize,
    pub total_shots: usize,
    pub unique_per_group: Vec<usize>,
    pub standard_error: f64,
    pub budget: ShotBudget,
}

/// Draws `shots` computational-basis outcomes.
pub fn sample_bitstrings<T: Real, R: Rng + ?Sized>(state: &StateVector<T>, shots: usize, rng: &mut R) -> Vec<usize> {
    let mut cdf = Vec::with_capacity(state.dim());
    let mut acc = 0.0f64;
    for a in state.amplitudes() {
        acc += a.norm_sqr().to_f64_lossy();
        cdf.push(acc);
    }
    let last = cdf.len() - 1;
    (0..shots)
        .map(|_| {
            let u = rng.gen::<f64>() * acc;
            cdf.partition_point(|&c| c <= u).min(last)
        })
        .collect()
}

/// Outcome histogram of `shots` computational-basis measurements.
pub fn bitstring_counts<T: Real>(state: &StateVector<T>, shots: usize, seed: u64) -> BTreeMap<usize, usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts = BTreeMap::new();
    for b in sample_bitstrings(state, shots, &mut rng) {
        *counts.entry(b).or_insert(0) += 1;
    }
    counts
}

/// Number of distinct outcomes among `shots` computational-basis measurements.
pub fn count_unique_bitstrings<T: Real>(state: &StateVector<T>, shots: usize, seed: u64) -> usize {
    bitstring_counts(state, shots, seed).len()
}

/// Rotates `state` so that measuring `group.basis` becomes a `Z` readout.
pub fn rotate_to_basis<T: Real>(state: &StateVector<T>, group: &MeasurementGroup) -> Result<StateVector<T>> {
    let mut s = state.clone();
    for (q, p) in group.basis.iter().enumerate() {
        match p {
            Pauli::X => s.apply_gate(&Gate::H(q))?,
            Pauli::Y => {
                s.apply_gate(&Gate::Sdg(q))?;
                s.apply_gate(&Gate::H(q))?;
            }
            Pauli::Z => {}
        }
    }
    Ok(s)
}

/// Energy from finite shots per measurement group. Group `g` draws from its
/// own stream of the generator seeded with `seed`.
pub fn estimate_energy_sampled<T: Real>(
    state: &StateVector<T>,
    h: &Hamiltonian<T>,
    budget: ShotBudget,
    seed: u64,
) -> Result<SampledEstimate> {
    if state.n_qubits() != h.n_qubits() {
        return Err(Error::argument(format!(
            "state has {} qubits, Hamiltonian {}",
            state.n_qubits(),
            h.n_qubits()
        )));
    }
    let groups = group_terms(h);
    let shots = budget.shots_per_group(groups.len())?;
    let mut energy = 0.0;
    let mut variance = 0.0;
    let mut unique_per_group = Vec::with_capacity(groups.len());
    for (g, group) in groups.iter().enumerate() {
        let members: Vec<(usize, f64)> = group
            .members
            .iter()
            .map(|&k| {
                let t = &h.terms()[k];
                let a = t.action();
                (a.flip | a.sign, t.coefficient.to_f64_lossy())
            })
            .collect();
        let rotated = rotate_to_basis(state, group)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(g as u64);
        let outcomes = sample_bitstrings(&rotated, shots, &mut rng);
        let mut sum = 0.0;
        let mut sum_sq = 0.0;
        let mut seen = BTreeSet::new();
        for &b in &outcomes {
            seen.insert(b);
            let v: f64 = members
                .iter()
                .map(|&(support, c)| if (b & support).count_ones() & 1 == 1 { -c } else { c })
                .sum();
            sum += v;
            sum_sq += v * v;
        }
        let n = shots as f64;
        let mean = sum / n;
        energy += mean;
        if shots > 1 {
            let var = ((sum_sq - n * mean * mean) / (n - 1.0)).max(0.0);
            variance += var / n;
        }
        unique_per_group.push(seen.len());
    }
    Ok(SampledEstimate {
        energy,
        shots_per_group: shots,
        groups: groups.len(),
        total_shots: shots * groups.len(),
        unique_per_group,
        standard_error: variance.sqrt(),
        budget,
    })
}
