//! Quasi-dynamical evolution: optimize, freeze the optimized state as the next
//! starting point, reset the parameters to zero and optimize again until the
//! energy stops moving.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::ansatz::Ansatz;
use crate::error::{Error, Result};
use crate::objective::{BaseState, GradientMethod, Objective, TrajectoryPoint, VqeObjective};
use crate::operator::PauliOperator;
use crate::optimizer::{minimize, OptimizerConfig, StopReason};
use crate::scalar::Real;
use crate::state::StateVector;

/// How earlier cycles are represented while optimizing the current one.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EvolutionMode {
    /// Store the optimized state and start from it directly.
    #[default]
    FrozenState,
    /// Re-execute every earlier layer from the initial state on each evaluation.
    DeepCircuit,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvolutionConfig {
    /// Evolution cycles after the initial VQE run.
    pub max_cycles: usize,
    /// Stop once consecutive cycle energies differ by less than this.
    pub stall_threshold: f64,
    pub mode: EvolutionMode,
    pub optimizer: OptimizerConfig,
    pub gradient: GradientMethod,
}

impl Default for EvolutionConfig {
    fn default() -> Self {
        Self {
            max_cycles: 10,
            stall_threshold: 1e-4,
            mode: EvolutionMode::default(),
            optimizer: OptimizerConfig::default(),
            gradient: GradientMethod::default(),
        }
    }
}

impl EvolutionConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_cycles < 1 {
            return Err(Error::argument("max_cycles must be at least 1"));
        }
        if !(self.stall_threshold > 0.0) {
            return Err(Error::argument(format!(
                "stall threshold must be positive, got {}",
                self.stall_threshold
            )));
        }
        Ok(())
    }
}

/// One optimizer run and the state it produced.
#[derive(Debug, Clone)]
pub struct CycleRecord<T> {
    pub cycle: usize,
    pub params: Vec<T>,
    pub start_energy: T,
    pub end_energy: T,
    pub n_iterations: usize,
    pub n_evaluations: usize,
    pub converged: bool,
    pub stop_reason: StopReason,
    pub trajectory: Vec<TrajectoryPoint<T>>,
    /// Normalized output state of this cycle.
    pub state: StateVector<T>,
    pub wall_seconds: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EvolutionStop {
    Stalled,
    MaxCycles,
}

#[derive(Debug, Clone)]
pub struct EvolutionResult<T> {
    pub cycles: Vec<CycleRecord<T>>,
    pub stop: EvolutionStop,
}

impl<T: Real> EvolutionResult<T> {
    pub fn energies(&self) -> Vec<T> {
        self.cycles.iter().map(|c| c.end_energy).collect()
    }

    pub fn final_energy(&self) -> T {
        self.last().end_energy
    }

    pub fn final_state(&self) -> &StateVector<T> {
        &self.last().state
    }

    pub fn total_evaluations(&self) -> usize {
        self.cycles.iter().map(|c| c.n_evaluations).sum()
    }

    fn last(&self) -> &CycleRecord<T> {
        self.cycles.last().expect("evolution always runs cycle 0")
    }
}

fn run_cycle<T: Real>(
    op: &PauliOperator<T>,
    ansatz: &Ansatz<T>,
    base: BaseState<'_, T>,
    init_params: &[T],
    optimizer: &OptimizerConfig,
    gradient: GradientMethod,
    cycle: usize,
) -> Result<CycleRecord<T>> {
    let clock = Instant::now();
    let mut objective = VqeObjective::new(op, ansatz, base, gradient);
    let result = minimize(&mut objective, init_params, optimizer)?;
    let start_energy = objective.trajectory()[0].energy;
    let mut state = objective.state(&result.best_params)?;
    state.normalize()?;
    Ok(CycleRecord {
        cycle,
        params: result.best_params,
        start_energy,
        end_energy: result.best_energy,
        n_iterations: result.n_iterations,
        n_evaluations: result.n_evaluations,
        converged: result.converged,
        stop_reason: result.stop_reason,
        trajectory: result.trajectory,
        state,
        wall_seconds: clock.elapsed().as_secs_f64(),
    })
}

/// A single VQE run from `initial_state`.
pub fn run_vqe<T: Real>(
    op: &PauliOperator<T>,
    ansatz: &Ansatz<T>,
    initial_state: &StateVector<T>,
    init_params: &[T],
    optimizer: &OptimizerConfig,
    gradient: GradientMethod,
) -> Result<CycleRecord<T>> {
    run_cycle(op, ansatz, BaseState::Frozen(initial_state), init_params, optimizer, gradient, 0)
}

/// Runs cycle 0 from `init_params`, then evolution cycles from zero parameters
/// using the same ansatz every cycle.
pub fn run_evolution<T: Real>(
    op: &PauliOperator<T>,
    ansatz: &Ansatz<T>,
    initial_state: &StateVector<T>,
    init_params: &[T],
    config: &EvolutionConfig,
) -> Result<EvolutionResult<T>> {
    run_evolution_with(op, |_| ansatz, initial_state, init_params, config)
}

/// Like [`run_evolution`] but with the ansatz chosen per cycle.
pub fn run_evolution_with<'a, T: Real>(
    op: &PauliOperator<T>,
    mut ansatz_for: impl FnMut(usize) -> &'a Ansatz<T>,
    initial_state: &StateVector<T>,
    init_params: &[T],
    config: &EvolutionConfig,
) -> Result<EvolutionResult<T>> {
    config.validate()?;
    let stall = T::of(config.stall_threshold);
    let mut layers: Vec<(Ansatz<T>, Vec<T>)> = Vec::new();
    let mut cycles: Vec<CycleRecord<T>> = Vec::new();
    for cycle in 0..=config.max_cycles {
        let ansatz = ansatz_for(cycle);
        let zeros;
        let params = if cycle == 0 {
            init_params
        } else {
            zeros = vec![T::zero(); ansatz.n_params()];
            &zeros
        };
        let base = match (config.mode, cycles.last()) {
            (_, None) => BaseState::Frozen(initial_state),
            (EvolutionMode::FrozenState, Some(prev)) => BaseState::Frozen(&prev.state),
            (EvolutionMode::DeepCircuit, Some(_)) => BaseState::Deep {
                initial: initial_state,
                layers: &layers,
            },
        };
        let record = run_cycle(op, ansatz, base, params, &config.optimizer, config.gradient, cycle)?;
        if config.mode == EvolutionMode::DeepCircuit {
            layers.push((ansatz.clone(), record.params.clone()));
        }
        let stalled = cycles
            .last()
            .is_some_and(|prev| (record.end_energy - prev.end_energy).abs() < stall);
        cycles.push(record);
        if stalled {
            return Ok(EvolutionResult {
                cycles,
                stop: EvolutionStop::Stalled,
            });
        }
    }
    Ok(EvolutionResult {
        cycles,
        stop: EvolutionStop::MaxCycles,
    })
}

/// `E / E0`.
pub fn energy_fidelity<T: Real>(energy: T, ground: T) -> Result<T> {
    if ground == T::zero() {
        return Err(Error::UndefinedFidelity);
    }
    Ok(energy / ground)
}
