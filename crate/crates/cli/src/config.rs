//! Flat experiment configuration: defaults, then a TOML file, then flags.

use std::path::{Path, PathBuf};

use clap::Args;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use vqevo_core::evolution::{EvolutionConfig, EvolutionMode};
use vqevo_core::exact::SectorChoice;
use vqevo_core::experiments::{InitialParams, InitialState};
use vqevo_core::objective::GradientMethod;
use vqevo_core::optimizer::OptimizerConfig;
use vqevo_core::sampling::ShotBudget;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum BudgetConvention {
    #[default]
    PerGroup,
    TotalSplit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum SolverChoice {
    #[default]
    Auto,
    Dense,
    Lanczos,
}

/// Every knob of every subcommand. Unset options are filled per command
/// before the configuration is recorded.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub problem: Option<String>,
    pub ansatz: Option<String>,
    /// `neel`, a bitstring (qubit 0 first), or `random-params`.
    pub initial_state: String,
    pub init_params: InitialParams,
    pub seed: u64,
    pub max_cycles: Option<usize>,
    pub stall_threshold: f64,
    pub mode: EvolutionMode,
    pub gradient: GradientMethod,
    pub grad_tol: f64,
    pub energy_tol: f64,
    pub max_iterations: Option<usize>,
    pub restarts: usize,
    pub rounding: f64,
    pub grid: usize,
    pub qubits: usize,
    pub instances: usize,
    pub trials: usize,
    pub shots: usize,
    pub shot_budget: BudgetConvention,
    pub eigenvalues: usize,
    pub solver: SolverChoice,
    pub sector: SectorChoice,
    pub n1q: Option<usize>,
    pub n2q: Option<usize>,
    pub groups: Option<usize>,
    pub layers: Option<usize>,
    pub evaluations: usize,
    pub profile: String,
    pub trajectory: bool,
    /// JSON file with `single_qubit` and `two_qubit` critical-path counts.
    pub counts_file: Option<PathBuf>,
    /// Destination file; standard output when unset. Not recorded.
    #[serde(skip_serializing)]
    pub output: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        let opt = OptimizerConfig::default();
        let evo = EvolutionConfig::default();
        Self {
            problem: None,
            ansatz: None,
            initial_state: "neel".into(),
            init_params: InitialParams::Zeros,
            seed: 0,
            max_cycles: None,
            stall_threshold: evo.stall_threshold,
            mode: evo.mode,
            gradient: evo.gradient,
            grad_tol: opt.grad_tol,
            energy_tol: opt.energy_tol,
            max_iterations: opt.max_iterations,
            restarts: 100,
            rounding: 1e-3,
            grid: 16,
            qubits: 6,
            instances: 50,
            trials: 1000,
            shots: 1 << 13,
            shot_budget: BudgetConvention::PerGroup,
            eigenvalues: 1,
            solver: SolverChoice::Auto,
            sector: SectorChoice::Auto,
            n1q: None,
            n2q: None,
            groups: None,
            layers: None,
            evaluations: 1,
            profile: "superconducting".into(),
            trajectory: false,
            counts_file: None,
            output: None,
        }
    }
}

/// Command-line overrides, one per configuration key.
#[derive(Debug, Clone, Default, Args)]
pub struct Overrides {
    /// Problem such as ring:8, ladder:13x2, cube:3x3x2, meanfield:5, random:6:seed=7.
    #[arg(long)]
    pub problem: Option<String>,
    /// xy, xy-half, xy-band:<w>[:wrap], xy-chain[:wrap] or meanfield.
    #[arg(long)]
    pub ansatz: Option<String>,
    #[arg(long)]
    pub initial_state: Option<String>,
    #[arg(long, value_parser = parse_init_params)]
    pub init_params: Option<InitialParams>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, visible_alias = "cycles")]
    pub max_cycles: Option<usize>,
    #[arg(long)]
    pub stall_threshold: Option<f64>,
    #[arg(long, value_parser = parse_mode)]
    pub mode: Option<EvolutionMode>,
    #[arg(long, value_parser = parse_gradient)]
    pub gradient: Option<GradientMethod>,
    #[arg(long)]
    pub grad_tol: Option<f64>,
    #[arg(long)]
    pub energy_tol: Option<f64>,
    #[arg(long)]
    pub max_iterations: Option<usize>,
    #[arg(long)]
    pub restarts: Option<usize>,
    #[arg(long)]
    pub rounding: Option<f64>,
    #[arg(long)]
    pub grid: Option<usize>,
    #[arg(long)]
    pub qubits: Option<usize>,
    #[arg(long)]
    pub instances: Option<usize>,
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long)]
    pub shots: Option<usize>,
    #[arg(long, value_enum)]
    pub shot_budget: Option<BudgetConvention>,
    #[arg(long)]
    pub eigenvalues: Option<usize>,
    #[arg(long, value_enum)]
    pub solver: Option<SolverChoice>,
    #[arg(long, value_parser = parse_sector)]
    pub sector: Option<SectorChoice>,
    #[arg(long)]
    pub n1q: Option<usize>,
    #[arg(long)]
    pub n2q: Option<usize>,
    #[arg(long)]
    pub groups: Option<usize>,
    #[arg(long)]
    pub layers: Option<usize>,
    #[arg(long)]
    pub evaluations: Option<usize>,
    #[arg(long)]
    pub profile: Option<String>,
    /// Include best-so-far energy trajectories in cycle records.
    #[arg(long)]
    pub trajectory: bool,
    #[arg(long = "counts", value_name = "FILE")]
    pub counts_file: Option<PathBuf>,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

fn parse_kebab<T: for<'de> Deserialize<'de>>(s: &str) -> Result<T, String> {
    serde_json::from_value(serde_json::Value::String(s.to_string())).map_err(|_| format!("invalid value '{s}'"))
}

fn parse_init_params(s: &str) -> Result<InitialParams, String> {
    parse_kebab(s)
}

fn parse_mode(s: &str) -> Result<EvolutionMode, String> {
    parse_kebab(s)
}

fn parse_gradient(s: &str) -> Result<GradientMethod, String> {
    parse_kebab(s)
}

fn parse_sector(s: &str) -> Result<SectorChoice, String> {
    parse_kebab(s)
}

macro_rules! override_fields {
    ($cfg:expr, $o:expr; $($field:ident),*; $($opt:ident),*) => {
        $(if let Some(v) = $o.$field.clone() { $cfg.$field = v; })*
        $(if $o.$opt.is_some() { $cfg.$opt = $o.$opt.clone(); })*
    };
}

impl ExperimentConfig {
    pub fn load(path: Option<&Path>, overrides: &Overrides) -> Result<Self, CliError> {
        let mut cfg = match path {
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(|e| CliError::Usage(format!("{}: {e}", p.display())))?;
                toml::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", p.display())))?
            }
            None => ExperimentConfig::default(),
        };
        cfg.apply(overrides);
        Ok(cfg)
    }

    pub fn apply(&mut self, o: &Overrides) {
        override_fields!(self, o;
            initial_state, init_params, seed, stall_threshold, mode, gradient, grad_tol, energy_tol,
            restarts, rounding, grid, qubits, instances, trials, shots, shot_budget, eigenvalues, solver,
            sector, evaluations, profile;
            problem, ansatz, max_cycles, max_iterations, n1q, n2q, groups, layers, counts_file, output);
        if o.trajectory {
            self.trajectory = true;
        }
    }

    pub fn optimizer(&self) -> OptimizerConfig {
        OptimizerConfig {
            grad_tol: self.grad_tol,
            energy_tol: self.energy_tol,
            max_iterations: self.max_iterations,
        }
    }

    pub fn evolution(&self) -> EvolutionConfig {
        EvolutionConfig {
            max_cycles: self.max_cycles.unwrap_or(EvolutionConfig::default().max_cycles),
            stall_threshold: self.stall_threshold,
            mode: self.mode,
            optimizer: self.optimizer(),
            gradient: self.gradient,
        }
    }

    pub fn budget(&self) -> ShotBudget {
        match self.shot_budget {
            BudgetConvention::PerGroup => ShotBudget::PerGroup(self.shots),
            BudgetConvention::TotalSplit => ShotBudget::TotalSplit(self.shots),
        }
    }

    /// `(state, parameters)` from the `initial_state` key.
    pub fn initial(&self) -> Result<(InitialState, InitialParams), CliError> {
        match self.initial_state.as_str() {
            "neel" | "reference" => Ok((InitialState::Reference, self.init_params)),
            "random-params" => Ok((InitialState::Reference, InitialParams::Random)),
            bits if !bits.is_empty() && bits.chars().all(|c| c == '0' || c == '1') => {
                Ok((InitialState::Bits(bits.to_string()), self.init_params))
            }
            other => Err(CliError::Usage(format!("invalid initial state '{other}'"))),
        }
    }

    /// Hex SHA-256 of the recorded configuration together with the command.
    pub fn hash(&self, command: &str) -> String {
        let body = serde_json::to_string(&(command, self)).expect("config serializes");
        let digest = Sha256::digest(body.as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}
