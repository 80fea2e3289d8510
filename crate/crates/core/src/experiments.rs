//! Experiment drivers shared by the command-line tool and the test suites.
//! Each returns a serializable report.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::ansatz::{Ansatz, AnsatzKind};
use crate::error::{Error, Result};
use crate::evolution::{energy_fidelity, run_evolution, run_vqe, CycleRecord, EvolutionConfig, EvolutionResult, EvolutionStop};
use crate::exact::oracle_ground_energy;
use crate::hamiltonian::{alternating_bits, build_random_hamiltonian, group_terms, Hamiltonian};
use crate::objective::{energy, GradientMethod};
use crate::operator::PauliOperator;
use crate::optimizer::{random_params, OptimizerConfig, StopReason};
use crate::problem::Problem;
use crate::runtime::{deep_circuit_counts, estimate, DeviceProfile, RuntimeEstimate};
use crate::sampling::{count_unique_bitstrings, estimate_energy_sampled, ShotBudget};
use crate::state::StateVector;

/// Registers up to this size get an exact ground energy for fidelities.
pub const ORACLE_MAX_QUBITS: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InitialState {
    /// The problem's reference product state (Néel where defined).
    #[default]
    Reference,
    /// An explicit bitstring, qubit 0 first.
    Bits(String),
}

impl InitialState {
    pub fn bits(&self, problem: &Problem<f64>) -> String {
        match self {
            InitialState::Reference => problem.reference_bits.clone(),
            InitialState::Bits(b) => b.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InitialParams {
    #[default]
    Zeros,
    /// Uniform in `[0, 2 pi)`.
    Random,
}

impl InitialParams {
    pub fn draw<R: Rng + ?Sized>(self, m: usize, rng: &mut R) -> Vec<f64> {
        match self {
            InitialParams::Zeros => vec![0.0; m],
            InitialParams::Random => random_params(m, rng),
        }
    }
}

fn stream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn fidelity(e: f64, ground: Option<f64>) -> Option<f64> {
    ground.and_then(|g| energy_fidelity(e, g).ok())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CycleSummary {
    pub cycle: usize,
    pub start_energy: f64,
    pub energy: f64,
    pub n_iterations: usize,
    pub n_evaluations: usize,
    pub converged: bool,
    pub stop_reason: StopReason,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fidelity: Option<f64>,
    /// `(evaluation index, best energy so far)` at every logged evaluation.
    pub trajectory: Vec<(usize, f64)>,
    /// Not serialized, so reports stay reproducible.
    #[serde(skip)]
    pub wall_seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvolutionReport {
    pub problem: String,
    pub ansatz: String,
    pub n_qubits: usize,
    pub n_params: usize,
    pub initial_bits: String,
    pub initial_energy: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ground_energy: Option<f64>,
    pub cycles: Vec<CycleSummary>,
    pub stop: EvolutionStop,
    pub total_evaluations: usize,
    pub final_energy: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub final_fidelity: Option<f64>,
}

/// VQE followed by evolution cycles.
pub fn evolution_experiment(
    problem: &Problem<f64>,
    ansatz_kind: &AnsatzKind,
    initial: &InitialState,
    params: InitialParams,
    config: &EvolutionConfig,
    seed: u64,
) -> Result<(EvolutionReport, EvolutionResult<f64>)> {
    let n = problem.n_qubits();
    let ansatz: Ansatz<f64> = ansatz_kind.build(n)?;
    let bits = initial.bits(problem);
    let state = StateVector::init_basis_state(n, &bits)?;
    let op = PauliOperator::new(&problem.hamiltonian);
    let init = params.draw(ansatz.n_params(), &mut stream(seed, 0));
    let ground = oracle_ground_energy(&problem.hamiltonian, ORACLE_MAX_QUBITS)?;
    let result = run_evolution(&op, &ansatz, &state, &init, config)?;
    let cycles = result
        .cycles
        .iter()
        .map(|c| {
            let mut best = f64::INFINITY;
            let trajectory = c
                .trajectory
                .iter()
                .map(|p| {
                    best = best.min(p.energy);
                    (p.evaluation, best)
                })
                .collect();
            CycleSummary {
                cycle: c.cycle,
                start_energy: c.start_energy,
                energy: c.end_energy,
                n_iterations: c.n_iterations,
                n_evaluations: c.n_evaluations,
                converged: c.converged,
                stop_reason: c.stop_reason,
                fidelity: fidelity(c.end_energy, ground),
                trajectory,
                wall_seconds: c.wall_seconds,
            }
        })
        .collect();
    let report = EvolutionReport {
        problem: problem.spec.to_string(),
        ansatz: ansatz_kind.to_string(),
        n_qubits: n,
        n_params: ansatz.n_params(),
        initial_energy: op.expectation(&state)?,
        initial_bits: bits,
        ground_energy: ground,
        cycles,
        stop: result.stop,
        total_evaluations: result.total_evaluations(),
        final_energy: result.final_energy(),
        final_fidelity: fidelity(result.final_energy(), ground),
    };
    Ok((report, result))
}

/// A single VQE run, seeded like cycle 0 of [`evolution_experiment`].
pub fn vqe_experiment(
    problem: &Problem<f64>,
    ansatz_kind: &AnsatzKind,
    initial: &InitialState,
    params: InitialParams,
    optimizer: &OptimizerConfig,
    gradient: GradientMethod,
    seed: u64,
) -> Result<CycleRecord<f64>> {
    let n = problem.n_qubits();
    let ansatz: Ansatz<f64> = ansatz_kind.build(n)?;
    let state = StateVector::init_basis_state(n, &initial.bits(problem))?;
    let op = PauliOperator::new(&problem.hamiltonian);
    let init = params.draw(ansatz.n_params(), &mut stream(seed, 0));
    run_vqe(&op, &ansatz, &state, &init, optimizer, gradient)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CensusReport {
    pub problem: String,
    pub ansatz: String,
    pub restarts: usize,
    pub rounding: f64,
    pub energies: Vec<f64>,
    pub unique_energies: Vec<f64>,
    pub unique_count: usize,
    pub min: f64,
    pub mean: f64,
    pub max: f64,
    pub initial_energy: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ground_energy: Option<f64>,
}

/// Distinct values after rounding to a multiple of `rounding`.
pub fn unique_rounded(values: &[f64], rounding: f64) -> Vec<f64> {
    let keys: BTreeSet<i64> = values.iter().map(|v| (v / rounding).round() as i64).collect();
    keys.into_iter().map(|k| k as f64 * rounding).collect()
}

/// Repeated VQE from the initial state with random parameters; counts the
/// distinct final energies.
pub fn census(
    problem: &Problem<f64>,
    ansatz_kind: &AnsatzKind,
    initial: &InitialState,
    restarts: usize,
    rounding: f64,
    optimizer: &OptimizerConfig,
    seed: u64,
) -> Result<CensusReport> {
    if restarts == 0 || !(rounding > 0.0) {
        return Err(Error::argument("census needs at least one restart and a positive rounding"));
    }
    let n = problem.n_qubits();
    let ansatz: Ansatz<f64> = ansatz_kind.build(n)?;
    let state = StateVector::init_basis_state(n, &initial.bits(problem))?;
    let op = PauliOperator::new(&problem.hamiltonian);
    let mut energies = Vec::with_capacity(restarts);
    for i in 0..restarts {
        let init = random_params(ansatz.n_params(), &mut stream(seed, i as u64));
        let r = run_vqe(&op, &ansatz, &state, &init, optimizer, GradientMethod::default())?;
        energies.push(r.end_energy);
    }
    let unique_energies = unique_rounded(&energies, rounding);
    Ok(CensusReport {
        problem: problem.spec.to_string(),
        ansatz: ansatz_kind.to_string(),
        restarts,
        rounding,
        unique_count: unique_energies.len(),
        unique_energies,
        min: energies.iter().copied().fold(f64::INFINITY, f64::min),
        mean: energies.iter().sum::<f64>() / restarts as f64,
        max: energies.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        energies,
        initial_energy: op.expectation(&state)?,
        ground_energy: oracle_ground_energy(&problem.hamiltonian, ORACLE_MAX_QUBITS)?,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LandscapeGrid {
    pub problem: String,
    pub ansatz: String,
    pub grid: usize,
    /// Grid coordinates along each axis, `2 pi k / grid`.
    pub thetas: Vec<f64>,
    /// `energies[i][j]` at `(thetas[i], thetas[j])`.
    pub energies: Vec<Vec<f64>>,
    pub min_energy: f64,
    pub argmin: (usize, usize),
}

/// Energy over a `grid x grid` mesh of a two-parameter ansatz.
pub fn landscape(problem: &Problem<f64>, ansatz_kind: &AnsatzKind, grid: usize) -> Result<LandscapeGrid> {
    let n = problem.n_qubits();
    let ansatz: Ansatz<f64> = ansatz_kind.build(n)?;
    if ansatz.n_params() != 2 {
        return Err(Error::argument(format!(
            "landscape needs a two-parameter ansatz, {ansatz_kind} on {n} qubits has {}",
            ansatz.n_params()
        )));
    }
    if grid == 0 {
        return Err(Error::argument("grid must be positive"));
    }
    let state = problem.reference_state()?;
    let op = PauliOperator::new(&problem.hamiltonian);
    let thetas: Vec<f64> = (0..grid).map(|k| std::f64::consts::TAU * k as f64 / grid as f64).collect();
    let mut energies = Vec::with_capacity(grid);
    let mut min_energy = f64::INFINITY;
    let mut argmin = (0, 0);
    for (i, &a) in thetas.iter().enumerate() {
        let mut row = Vec::with_capacity(grid);
        for (j, &b) in thetas.iter().enumerate() {
            let e = energy(&op, &ansatz, &[a, b], &state)?;
            if e < min_energy {
                min_energy = e;
                argmin = (i, j);
            }
            row.push(e);
        }
        energies.push(row);
    }
    Ok(LandscapeGrid {
        problem: problem.spec.to_string(),
        ansatz: ansatz_kind.to_string(),
        grid,
        thetas,
        energies,
        min_energy,
        argmin,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RandomInstance {
    pub instance: usize,
    pub hamiltonian_seed: u64,
    /// Energy after the initial VQE run.
    pub vqe_energy: f64,
    /// Energy after the evolution cycles.
    pub evolved_energy: f64,
    /// `vqe_energy / evolved_energy`.
    pub ratio: f64,
    pub cycles_run: usize,
    pub total_evaluations: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ground_energy: Option<f64>,
}

/// Default ansatz for random-Hamiltonian batches: the half ansatz at six
/// qubits, the full one otherwise.
pub fn random_batch_ansatz(n: usize) -> AnsatzKind {
    if n == 6 {
        "xy-half".parse().expect("valid ansatz name")
    } else {
        AnsatzKind::Xy
    }
}

/// Random Hamiltonians, each optimized from random parameters on the
/// alternating state and then evolved.
pub fn random_batch(
    n: usize,
    instances: usize,
    ansatz_kind: &AnsatzKind,
    config: &EvolutionConfig,
    seed: u64,
    with_oracle: bool,
) -> Result<Vec<RandomInstance>> {
    let ansatz: Ansatz<f64> = ansatz_kind.build(n)?;
    let state = StateVector::init_basis_state(n, &alternating_bits(n))?;
    let mut master = ChaCha8Rng::seed_from_u64(seed);
    (0..instances)
        .map(|instance| {
            let hamiltonian_seed: u64 = master.gen();
            let h: Hamiltonian<f64> = build_random_hamiltonian(n, hamiltonian_seed)?;
            let op = PauliOperator::new(&h);
            let init = random_params(ansatz.n_params(), &mut stream(seed, instance as u64 + 1));
            let r = run_evolution(&op, &ansatz, &state, &init, config)?;
            let vqe_energy = r.cycles[0].end_energy;
            let evolved_energy = r.final_energy();
            Ok(RandomInstance {
                instance,
                hamiltonian_seed,
                vqe_energy,
                evolved_energy,
                ratio: vqe_energy / evolved_energy,
                cycles_run: r.cycles.len() - 1,
                total_evaluations: r.total_evaluations(),
                ground_energy: if with_oracle { oracle_ground_energy(&h, ORACLE_MAX_QUBITS)? } else { None },
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlateauStats {
    pub problem: String,
    pub ansatz: String,
    pub trials: usize,
    pub mean: f64,
    pub std: f64,
    pub min: f64,
    pub max: f64,
    pub reference_energy: f64,
}

/// Energies at random parameter vectors, without optimization.
pub fn plateau_probe(problem: &Problem<f64>, ansatz_kind: &AnsatzKind, trials: usize, seed: u64) -> Result<PlateauStats> {
    if trials == 0 {
        return Err(Error::argument("plateau probe needs at least one trial"));
    }
    let n = problem.n_qubits();
    let ansatz: Ansatz<f64> = ansatz_kind.build(n)?;
    let state = problem.reference_state()?;
    let op = PauliOperator::new(&problem.hamiltonian);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let energies = (0..trials)
        .map(|_| energy(&op, &ansatz, &random_params(ansatz.n_params(), &mut rng), &state))
        .collect::<Result<Vec<f64>>>()?;
    let mean = energies.iter().sum::<f64>() / trials as f64;
    let var = energies.iter().map(|e| (e - mean).powi(2)).sum::<f64>() / trials as f64;
    Ok(PlateauStats {
        problem: problem.spec.to_string(),
        ansatz: ansatz_kind.to_string(),
        trials,
        mean,
        std: var.sqrt(),
        min: energies.iter().copied().fold(f64::INFINITY, f64::min),
        max: energies.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        reference_energy: op.expectation(&state)?,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleReport {
    pub shots: usize,
    pub budget: ShotBudget,
    pub groups: usize,
    /// Distinct computational-basis outcomes among `shots` draws.
    pub unique_count: usize,
    pub sampled_energy: f64,
    pub standard_error: f64,
    /// Noise-free expectation of the sampled state.
    pub exact_energy: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ground_energy: Option<f64>,
    /// `sampled_energy / ground_energy`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fidelity: Option<f64>,
}

/// Finite-shot statistics of `state`.
pub fn sample_analysis(
    state: &StateVector<f64>,
    h: &Hamiltonian<f64>,
    budget: ShotBudget,
    seed: u64,
    ground_energy: Option<f64>,
) -> Result<SampleReport> {
    let est = estimate_energy_sampled(state, h, budget, seed)?;
    let op = PauliOperator::new(h);
    let shots = est.shots_per_group;
    Ok(SampleReport {
        shots,
        budget,
        groups: est.groups,
        unique_count: count_unique_bitstrings(state, shots, seed),
        sampled_energy: est.energy,
        standard_error: est.standard_error,
        exact_energy: op.expectation(state)?,
        ground_energy,
        fidelity: fidelity(est.energy, ground_energy),
    })
}

/// Hardware time for `layers` stacked ansatz layers on the problem's
/// initial state, measured in every readout group.
pub fn runtime_projection(
    problem: &Problem<f64>,
    ansatz_kind: &AnsatzKind,
    layers: usize,
    n_evaluations: usize,
    shots: usize,
    profile: &DeviceProfile,
) -> Result<RuntimeEstimate> {
    let ansatz: Ansatz<f64> = ansatz_kind.build(problem.n_qubits())?;
    let groups = group_terms(&problem.hamiltonian);
    let counts = deep_circuit_counts(&problem.reference_bits, &ansatz, layers, &groups)?;
    Ok(estimate(counts, profile, groups.len(), shots, n_evaluations))
}
