//! Wall-clock projection for running the same computation on gate-based
//! hardware: sequential gates times measurement groups times shots.

use serde::{Deserialize, Serialize};

use crate::ansatz::{lower_to_circuit, Ansatz};
use crate::circuit::{Circuit, PathCounts};
use crate::error::{Error, Result};
use crate::gate::Gate;
use crate::hamiltonian::MeasurementGroup;
use crate::pauli::Pauli;
use crate::scalar::Real;
use crate::state::parse_bits;

pub const SECONDS_PER_DAY: f64 = 86_400.0;

/// Gate durations in seconds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeviceProfile {
    pub name: String,
    pub t_1q: f64,
    pub t_2q: f64,
}

impl DeviceProfile {
    pub fn new(name: impl Into<String>, t_1q: f64, t_2q: f64) -> Result<Self> {
        if !(t_1q > 0.0 && t_2q > 0.0 && t_1q.is_finite() && t_2q.is_finite()) {
            return Err(Error::argument(format!("gate times must be positive, got {t_1q} and {t_2q}")));
        }
        Ok(Self {
            name: name.into(),
            t_1q,
            t_2q,
        })
    }

    /// 85 ns single-qubit and 400 ns two-qubit gates.
    pub fn superconducting() -> Self {
        Self {
            name: "superconducting".into(),
            t_1q: 85e-9,
            t_2q: 400e-9,
        }
    }

    /// 1.6 us two-qubit gates; single-qubit gates as in the superconducting
    /// preset.
    pub fn trapped_ion() -> Self {
        Self {
            name: "trapped-ion".into(),
            t_1q: 85e-9,
            t_2q: 1.6e-6,
        }
    }

    pub fn preset(name: &str) -> Result<Self> {
        match name {
            "superconducting" | "ibm" => Ok(Self::superconducting()),
            "trapped-ion" | "ion" => Ok(Self::trapped_ion()),
            _ => Err(Error::argument(format!("unknown device profile '{name}'"))),
        }
    }
}

impl Default for DeviceProfile {
    fn default() -> Self {
        Self::superconducting()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RuntimeEstimate {
    pub n_1q_sequential: usize,
    pub n_2q_sequential: usize,
    pub groups: usize,
    pub shots: usize,
    pub seconds_per_evaluation: f64,
    pub n_evaluations: usize,
    pub total_seconds: f64,
    pub total_days: f64,
    pub profile: DeviceProfile,
}

/// Single- and two-qubit gate counts along the critical path.
pub fn sequential_gate_depth<T: Real>(circuit: &Circuit<T>) -> PathCounts {
    circuit.critical_path()
}

/// `(n_1q t_1q + n_2q t_2q) * groups * shots`.
pub fn estimate_energy_eval_time(counts: PathCounts, profile: &DeviceProfile, groups: usize, shots: usize) -> f64 {
    let per_shot = counts.single_qubit as f64 * profile.t_1q + counts.two_qubit as f64 * profile.t_2q;
    per_shot * groups as f64 * shots as f64
}

/// `(seconds, days)` for `n_evaluations` evaluations.
pub fn estimate_total_time(seconds_per_evaluation: f64, n_evaluations: usize) -> (f64, f64) {
    let total = seconds_per_evaluation * n_evaluations as f64;
    (total, total / SECONDS_PER_DAY)
}

pub fn estimate(
    counts: PathCounts,
    profile: &DeviceProfile,
    groups: usize,
    shots: usize,
    n_evaluations: usize,
) -> RuntimeEstimate {
    let per_eval = estimate_energy_eval_time(counts, profile, groups, shots);
    let (total_seconds, total_days) = estimate_total_time(per_eval, n_evaluations);
    RuntimeEstimate {
        n_1q_sequential: counts.single_qubit,
        n_2q_sequential: counts.two_qubit,
        groups,
        shots,
        seconds_per_evaluation: per_eval,
        n_evaluations,
        total_seconds,
        total_days,
        profile: profile.clone(),
    }
}

/// State preparation, `layers` copies of the lowered ansatz and the readout
/// rotations for `basis`.
pub fn deep_circuit<T: Real>(
    initial_bits: &str,
    ansatz: &Ansatz<T>,
    layers: usize,
    basis: Option<&[Pauli]>,
) -> Result<Circuit<T>> {
    let n = ansatz.n_qubits();
    if initial_bits.len() != n {
        return Err(Error::argument(format!("initial bitstring has {} bits, ansatz {n}", initial_bits.len())));
    }
    let index = parse_bits(initial_bits)?;
    let mut circuit = Circuit::new(n);
    for q in (0..n).filter(|q| index >> q & 1 == 1) {
        circuit.gates.push(Gate::X(q));
    }
    let layer = lower_to_circuit(ansatz, &vec![T::zero(); ansatz.n_params()])?;
    for _ in 0..layers {
        circuit.append(&layer);
    }
    if let Some(basis) = basis {
        for (q, p) in basis.iter().enumerate() {
            match p {
                Pauli::X => circuit.gates.push(Gate::H(q)),
                Pauli::Y => {
                    circuit.gates.push(Gate::Sdg(q));
                    circuit.gates.push(Gate::H(q));
                }
                Pauli::Z => {}
            }
        }
    }
    Ok(circuit)
}

/// Critical path of the deep circuit, maximized over the readout groups.
pub fn deep_circuit_counts<T: Real>(
    initial_bits: &str,
    ansatz: &Ansatz<T>,
    layers: usize,
    groups: &[MeasurementGroup],
) -> Result<PathCounts> {
    let mut best = sequential_gate_depth(&deep_circuit(initial_bits, ansatz, layers, None)?);
    for g in groups {
        let c = sequential_gate_depth(&deep_circuit(initial_bits, ansatz, layers, Some(&g.basis))?);
        if (c.total(), c.two_qubit) > (best.total(), best.two_qubit) {
            best = c;
        }
    }
    Ok(best)
}

/// Published resource figures for large runs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReferenceRun {
    pub problem: &'static str,
    /// Sequential `(1q, 2q)` gate counts, when quoted.
    pub counts: Option<(usize, usize)>,
    pub groups: usize,
    pub shots: usize,
    pub seconds_per_evaluation: f64,
    pub n_evaluations: usize,
    pub days: f64,
}

pub const REFERENCE_RUNS: [ReferenceRun; 3] = [
    ReferenceRun {
        problem: "ring:24",
        counts: Some((6400, 11500)),
        groups: 3,
        shots: 1 << 13,
        seconds_per_evaluation: 126.0,
        n_evaluations: 84744,
        days: 124.0,
    },
    ReferenceRun {
        problem: "square:6x6",
        counts: None,
        groups: 3,
        shots: 1 << 13,
        seconds_per_evaluation: 90.0,
        n_evaluations: 12700,
        days: 13.0,
    },
    ReferenceRun {
        problem: "cube:3x3x3",
        counts: None,
        groups: 3,
        shots: 1 << 13,
        seconds_per_evaluation: 52.0,
        n_evaluations: 68426,
        days: 41.0,
    },
];

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ansatz::xy_ansatz;

    fn counts(single_qubit: usize, two_qubit: usize) -> PathCounts {
        PathCounts { single_qubit, two_qubit }
    }

    #[test]
    fn depth_examples() {
        let mut c = Circuit::<f64>::new(3);
        c.gates.push(Gate::X(0));
        assert_eq!(sequential_gate_depth(&c), counts(1, 0));
        c.gates.push(Gate::X(1));
        assert_eq!(sequential_gate_depth(&c), counts(1, 0));
        let mut chain = Circuit::<f64>::new(3);
        chain.gates.extend([
            Gate::Cnot { control: 0, target: 1 },
            Gate::Cnot { control: 1, target: 2 },
            Gate::Cnot { control: 2, target: 0 },
        ]);
        assert_eq!(sequential_gate_depth(&chain), counts(0, 3));
    }

    #[test]
    fn ring24_per_evaluation_time() {
        let t = estimate_energy_eval_time(counts(6400, 11500), &DeviceProfile::superconducting(), 3, 1 << 13);
        assert!((t - 126.0).abs() < 1.0, "{t}");
        assert_eq!(estimate_energy_eval_time(counts(0, 0), &DeviceProfile::default(), 3, 8192), 0.0);
        let doubled = estimate_energy_eval_time(counts(6400, 11500), &DeviceProfile::default(), 3, 1 << 14);
        assert_eq!(doubled, 2.0 * t);
    }

    #[test]
    fn total_times() {
        let (_, d) = estimate_total_time(126.0, 84744);
        assert!((d - 123.6).abs() < 0.05);
        let (_, d) = estimate_total_time(90.0, 12700);
        assert!((d - 13.2).abs() < 0.05);
        let (s, d) = estimate_total_time(52.0, 68426);
        assert!((d - 41.2).abs() < 0.05);
        assert_eq!(s, 52.0 * 68426.0);
    }

    #[test]
    fn deep_circuit_grows_with_layers() {
        let a = xy_ansatz::<f64>(4).unwrap();
        let mut prev = 0.0;
        for layers in 1..4 {
            let c = deep_circuit_counts("0101", &a, layers, &[]).unwrap();
            let t = estimate_energy_eval_time(c, &DeviceProfile::default(), 3, 100);
            assert!(t >= prev);
            prev = t;
        }
    }

    #[test]
    fn profiles() {
        assert!(DeviceProfile::new("x", 0.0, 1.0).is_err());
        assert_eq!(DeviceProfile::preset("ion").unwrap().t_2q, 1.6e-6);
        assert!(DeviceProfile::preset("analog").is_err());
    }
}
