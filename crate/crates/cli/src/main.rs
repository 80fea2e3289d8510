//! `vqevo`: command-line experiments over the vqevo-core workbench.
//!
//! Every subcommand resolves one flat configuration (defaults, then an
//! optional TOML file, then flags) and writes JSON lines, or CSV for grids.
//! Each record carries the resolved configuration and its hash; wall-clock
//! times live in a separate `timing` field so the rest is reproducible.

mod config;
mod error;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Map, Value};
use vqevo_core::ansatz::AnsatzKind;
use vqevo_core::circuit::PathCounts;
use vqevo_core::exact::{dense_ground_energy, lanczos_ground_energy, LanczosConfig, SpectrumResult};
use vqevo_core::experiments::{
    census, evolution_experiment, landscape, plateau_probe, random_batch, random_batch_ansatz, runtime_projection,
    sample_analysis, vqe_experiment, ORACLE_MAX_QUBITS,
};
use vqevo_core::exact::oracle_ground_energy;
use vqevo_core::hamiltonian::group_terms;
use vqevo_core::problem::{Problem, ProblemSpec};
use vqevo_core::runtime::{estimate, DeviceProfile, RuntimeEstimate, REFERENCE_RUNS};

use crate::config::{ExperimentConfig, Overrides, SolverChoice};
use crate::error::CliError;

const VERSION: &str = env!("CARGO_PKG_VERSION");

const EVALUATION_ACCOUNTING: &str =
    "one energy evaluation per objective call; each gradient costs two evaluations per parameter";

/// Registers up to this size use the dense eigensolver under `--solver auto`.
const AUTO_DENSE_QUBITS: usize = 8;

#[derive(Debug, Parser)]
#[command(name = "vqevo", version, about = "VQE with quasi-dynamical evolution cycles")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Plain VQE followed by evolution cycles; one record per cycle.
    RunEvolution(CommandArgs),
    /// Repeated random-start VQE; counts distinct final energies.
    Census(CommandArgs),
    /// Energy over a grid of a two-parameter ansatz, as CSV.
    Landscape(CommandArgs),
    /// Random Hamiltonians, VQE then evolution; one record per instance.
    RandomBatch(CommandArgs),
    /// Energy statistics at random parameters without optimization.
    PlateauProbe(CommandArgs),
    /// Finite-shot energy estimate of the optimized state.
    SampleAnalysis(CommandArgs),
    /// Lowest eigenvalues by dense diagonalization or Lanczos.
    Exact(CommandArgs),
    /// Hardware time from critical-path gate counts.
    #[command(visible_alias = "runtime")]
    RuntimeEstimate(CommandArgs),
}

#[derive(Debug, Args)]
struct CommandArgs {
    /// Problem spec; same as `--problem`.
    #[arg(value_name = "PROBLEM")]
    target: Option<String>,
    /// Flat TOML file with configuration keys.
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(flatten)]
    overrides: Overrides,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::RunEvolution(_) => "run-evolution",
            Command::Census(_) => "census",
            Command::Landscape(_) => "landscape",
            Command::RandomBatch(_) => "random-batch",
            Command::PlateauProbe(_) => "plateau-probe",
            Command::SampleAnalysis(_) => "sample-analysis",
            Command::Exact(_) => "exact",
            Command::RuntimeEstimate(_) => "runtime-estimate",
        }
    }

    fn args(&self) -> &CommandArgs {
        match self {
            Command::RunEvolution(a)
            | Command::Census(a)
            | Command::Landscape(a)
            | Command::RandomBatch(a)
            | Command::PlateauProbe(a)
            | Command::SampleAnalysis(a)
            | Command::Exact(a)
            | Command::RuntimeEstimate(a) => a,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        // A closed downstream pipe (`| head`) is not a failure.
        Err(CliError::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("vqevo {}: {e}", cli.command.name());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(command: &Command) -> Result<(), CliError> {
    let args = command.args();
    let mut cfg = ExperimentConfig::load(args.config.as_deref(), &args.overrides)?;
    if let Some(t) = &args.target {
        if cfg.problem.is_some() && args.overrides.problem.is_some() {
            return Err(CliError::Usage("problem given both positionally and by --problem".into()));
        }
        cfg.problem = Some(t.clone());
    }
    let name = command.name();
    resolve(command, &mut cfg)?;
    let mut out = Output::open(name, &cfg)?;
    match command {
        Command::RunEvolution(_) => cmd_run_evolution(&cfg, &mut out),
        Command::Census(_) => cmd_census(&cfg, &mut out),
        Command::Landscape(_) => cmd_landscape(&cfg, &mut out),
        Command::RandomBatch(_) => cmd_random_batch(&cfg, &mut out),
        Command::PlateauProbe(_) => cmd_plateau_probe(&cfg, &mut out),
        Command::SampleAnalysis(_) => cmd_sample_analysis(&cfg, &mut out),
        Command::Exact(_) => cmd_exact(&cfg, &mut out),
        Command::RuntimeEstimate(_) => cmd_runtime(&cfg, &mut out),
    }?;
    out.finish()
}

/// Fills command-specific defaults so the recorded configuration is complete.
fn resolve(command: &Command, cfg: &mut ExperimentConfig) -> Result<(), CliError> {
    let needs_problem = match command {
        Command::RandomBatch(_) => false,
        Command::RuntimeEstimate(_) => cfg.n1q.is_none() && cfg.n2q.is_none() && cfg.counts_file.is_none(),
        _ => true,
    };
    if needs_problem {
        let spec = problem_spec(cfg)?;
        if cfg.ansatz.is_none() {
            let kind = match spec {
                ProblemSpec::MeanField { .. } => AnsatzKind::MeanField,
                _ => AnsatzKind::Xy,
            };
            cfg.ansatz = Some(kind.to_string());
        }
        cfg.problem = Some(spec.to_string());
    }
    match command {
        Command::RunEvolution(_) => {
            cfg.max_cycles.get_or_insert(10);
        }
        Command::RandomBatch(_) => {
            cfg.max_cycles.get_or_insert(9);
            if cfg.ansatz.is_none() {
                cfg.ansatz = Some(random_batch_ansatz(cfg.qubits).to_string());
            }
        }
        Command::RuntimeEstimate(_) if needs_problem => {
            cfg.layers.get_or_insert(1);
        }
        _ => {}
    }
    if let Some(a) = &cfg.ansatz {
        cfg.ansatz = Some(a.parse::<AnsatzKind>()?.to_string());
    }
    cfg.initial()?;
    Ok(())
}

fn problem_spec(cfg: &ExperimentConfig) -> Result<ProblemSpec, CliError> {
    let s = cfg
        .problem
        .as_deref()
        .ok_or_else(|| CliError::Usage("a problem is required, e.g. ring:8".into()))?;
    Ok(s.parse::<ProblemSpec>()?)
}

fn problem(cfg: &ExperimentConfig) -> Result<Problem<f64>, CliError> {
    Ok(problem_spec(cfg)?.build()?)
}

fn ansatz(cfg: &ExperimentConfig) -> Result<AnsatzKind, CliError> {
    let a = cfg.ansatz.as_deref().expect("ansatz resolved");
    Ok(a.parse()?)
}

/// JSON-lines or CSV sink that stamps provenance on every record.
struct Output {
    writer: Box<dyn Write>,
    experiment: &'static str,
    provenance: Value,
}

impl Output {
    fn open(experiment: &'static str, cfg: &ExperimentConfig) -> Result<Self, CliError> {
        let writer: Box<dyn Write> = match &cfg.output {
            Some(path) => Box::new(BufWriter::new(File::create(path)?)),
            None => Box::new(BufWriter::new(io::stdout().lock())),
        };
        let provenance = json!({
            "config_hash": cfg.hash(experiment),
            "seed": cfg.seed,
            "version": VERSION,
            "evaluation_accounting": EVALUATION_ACCOUNTING,
            "config": cfg,
        });
        Ok(Self { writer, experiment, provenance })
    }

    fn record<S: Serialize>(&mut self, kind: &str, payload: &S, timing: Option<Value>) -> Result<(), CliError> {
        let mut map = match serde_json::to_value(payload).expect("records serialize") {
            Value::Object(m) => m,
            other => {
                let mut m = Map::new();
                m.insert("value".into(), other);
                m
            }
        };
        check_finite(&Value::Object(map.clone()))?;
        map.insert("record".into(), kind.into());
        map.insert("experiment".into(), self.experiment.into());
        map.insert("provenance".into(), self.provenance.clone());
        if let Some(t) = timing {
            map.insert("timing".into(), t);
        }
        serde_json::to_writer(&mut self.writer, &Value::Object(map)).map_err(io::Error::from)?;
        self.writer.write_all(b"\n")?;
        Ok(())
    }

    fn line(&mut self, text: &str) -> Result<(), CliError> {
        writeln!(self.writer, "{text}")?;
        Ok(())
    }

    fn finish(mut self) -> Result<(), CliError> {
        self.writer.flush()?;
        Ok(())
    }
}

/// `serde_json` writes non-finite floats as `null`; refuse them instead.
fn check_finite(v: &Value) -> Result<(), CliError> {
    match v {
        Value::Null => Err(CliError::Core(vqevo_core::Error::NonFiniteEnergy { energy: f64::NAN, params: Vec::new() })),
        Value::Array(a) => a.iter().try_for_each(check_finite),
        Value::Object(m) => m.values().try_for_each(check_finite),
        _ => Ok(()),
    }
}

fn timing(seconds: f64) -> Option<Value> {
    Some(json!({ "wall_seconds": seconds }))
}

fn cmd_run_evolution(cfg: &ExperimentConfig, out: &mut Output) -> Result<(), CliError> {
    let start = Instant::now();
    let p = problem(cfg)?;
    let kind = ansatz(cfg)?;
    let (state, params) = cfg.initial()?;
    let evo = cfg.evolution();
    let (report, _) = evolution_experiment(&p, &kind, &state, params, &evo, cfg.seed)?;
    for c in &report.cycles {
        let mut rec = json!({
            "problem": report.problem,
            "cycle": c.cycle,
            "start_energy": c.start_energy,
            "energy": c.energy,
            "evals": c.n_evaluations,
            "iterations": c.n_iterations,
            "converged": c.converged,
            "stop_reason": c.stop_reason,
        });
        if let Some(f) = c.fidelity {
            rec["fidelity"] = json!(f);
        }
        if cfg.trajectory {
            rec["trajectory"] = json!(c.trajectory);
        }
        out.record("cycle", &rec, timing(c.wall_seconds))?;
    }
    let mut summary = serde_json::to_value(&report).expect("report serializes");
    summary.as_object_mut().expect("object").remove("cycles");
    summary["cycle_energies"] = json!(report.cycles.iter().map(|c| c.energy).collect::<Vec<_>>());
    out.record("summary", &summary, timing(start.elapsed().as_secs_f64()))
}

fn cmd_census(cfg: &ExperimentConfig, out: &mut Output) -> Result<(), CliError> {
    let start = Instant::now();
    let (state, _) = cfg.initial()?;
    let report = census(&problem(cfg)?, &ansatz(cfg)?, &state, cfg.restarts, cfg.rounding, &cfg.optimizer(), cfg.seed)?;
    out.record("census", &report, timing(start.elapsed().as_secs_f64()))
}

fn cmd_landscape(cfg: &ExperimentConfig, out: &mut Output) -> Result<(), CliError> {
    let grid = landscape(&problem(cfg)?, &ansatz(cfg)?, cfg.grid)?;
    out.line(&format!("# experiment=landscape problem={} ansatz={}", grid.problem, grid.ansatz))?;
    out.line(&format!("# config_hash={} seed={} version={VERSION}", cfg.hash("landscape"), cfg.seed))?;
    out.line(&format!(
        "# min_energy={} argmin_i={} argmin_j={}",
        grid.min_energy, grid.argmin.0, grid.argmin.1
    ))?;
    out.line("i,j,theta_1,theta_2,energy")?;
    for (i, row) in grid.energies.iter().enumerate() {
        for (j, e) in row.iter().enumerate() {
            out.line(&format!("{i},{j},{},{},{e}", grid.thetas[i], grid.thetas[j]))?;
        }
    }
    Ok(())
}

fn cmd_random_batch(cfg: &ExperimentConfig, out: &mut Output) -> Result<(), CliError> {
    let start = Instant::now();
    let with_oracle = cfg.qubits <= ORACLE_MAX_QUBITS;
    let batch = random_batch(cfg.qubits, cfg.instances, &ansatz(cfg)?, &cfg.evolution(), cfg.seed, with_oracle)?;
    for inst in &batch {
        out.record("instance", inst, None)?;
    }
    let ratios: Vec<f64> = batch.iter().map(|b| b.ratio).collect();
    let mean = ratios.iter().sum::<f64>() / ratios.len().max(1) as f64;
    let summary = json!({
        "n_qubits": cfg.qubits,
        "instances": batch.len(),
        "mean_ratio": mean,
        "min_ratio": ratios.iter().copied().fold(f64::INFINITY, f64::min),
        "max_ratio": ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max),
    });
    out.record("summary", &summary, timing(start.elapsed().as_secs_f64()))
}

fn cmd_plateau_probe(cfg: &ExperimentConfig, out: &mut Output) -> Result<(), CliError> {
    let start = Instant::now();
    let stats = plateau_probe(&problem(cfg)?, &ansatz(cfg)?, cfg.trials, cfg.seed)?;
    out.record("plateau", &stats, timing(start.elapsed().as_secs_f64()))
}

/// Samples the VQE optimum, or the evolved state when `max_cycles` is set.
fn cmd_sample_analysis(cfg: &ExperimentConfig, out: &mut Output) -> Result<(), CliError> {
    let start = Instant::now();
    let p = problem(cfg)?;
    let kind = ansatz(cfg)?;
    let (initial, params) = cfg.initial()?;
    let ground = oracle_ground_energy(&p.hamiltonian, ORACLE_MAX_QUBITS)?;
    let state = if cfg.max_cycles.is_some() {
        evolution_experiment(&p, &kind, &initial, params, &cfg.evolution(), cfg.seed)?.1.final_state().clone()
    } else {
        vqe_experiment(&p, &kind, &initial, params, &cfg.optimizer(), cfg.gradient, cfg.seed)?.state
    };
    let report = sample_analysis(&state, &p.hamiltonian, cfg.budget(), cfg.seed, ground)?;
    let mut rec = serde_json::to_value(&report).expect("report serializes");
    rec["lattice"] = json!(p.spec.to_string());
    out.record("sample", &rec, timing(start.elapsed().as_secs_f64()))
}

fn cmd_exact(cfg: &ExperimentConfig, out: &mut Output) -> Result<(), CliError> {
    let start = Instant::now();
    let p = problem(cfg)?;
    let dense = match cfg.solver {
        SolverChoice::Dense => true,
        SolverChoice::Lanczos => false,
        SolverChoice::Auto => p.n_qubits() <= AUTO_DENSE_QUBITS,
    };
    let spectrum: SpectrumResult = if dense {
        dense_ground_energy(&p.hamiltonian, cfg.eigenvalues)?
    } else {
        let lc = LanczosConfig { seed: cfg.seed, sector: cfg.sector, ..Default::default() };
        lanczos_ground_energy(&p.hamiltonian, cfg.eigenvalues, &lc)?
    };
    let mut rec = serde_json::to_value(&spectrum).expect("spectrum serializes");
    rec["problem"] = json!(p.spec.to_string());
    rec["per_spin"] = json!(spectrum.per_spin());
    rec["ground_energy"] = json!(spectrum.ground_energy());
    if rec["sector"].is_null() {
        rec.as_object_mut().expect("object").remove("sector");
    }
    out.record("spectrum", &rec, timing(start.elapsed().as_secs_f64()))
}

fn cmd_runtime(cfg: &ExperimentConfig, out: &mut Output) -> Result<(), CliError> {
    let profile = DeviceProfile::preset(&cfg.profile)?;
    let (est, label): (RuntimeEstimate, Option<String>) = match (&cfg.counts_file, cfg.n1q, cfg.n2q) {
        (Some(path), None, None) => {
            let text = std::fs::read_to_string(path)?;
            let counts: PathCounts = serde_json::from_str(&text)
                .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
            (counts_mode(cfg, counts, &profile)?, None)
        }
        (None, Some(n1q), Some(n2q)) => {
            let counts = PathCounts { single_qubit: n1q, two_qubit: n2q };
            (counts_mode(cfg, counts, &profile)?, None)
        }
        (None, None, None) => {
            let p = problem(cfg)?;
            let layers = cfg.layers.expect("layers resolved");
            let est = runtime_projection(&p, &ansatz(cfg)?, layers, cfg.evaluations, cfg.shots, &profile)?;
            (est, Some(p.spec.to_string()))
        }
        _ => {
            return Err(CliError::Usage(
                "give either --n1q and --n2q, or --counts, or a problem".into(),
            ))
        }
    };
    let mut rec = serde_json::to_value(&est).expect("estimate serializes");
    rec["t_1q"] = json!(est.profile.t_1q);
    rec["t_2q"] = json!(est.profile.t_2q);
    if let Some(l) = &label {
        rec["problem"] = json!(l);
        rec["layers"] = json!(cfg.layers);
    }
    let reference = REFERENCE_RUNS.iter().find(|r| match &label {
        Some(l) => r.problem == l,
        None => r.counts == Some((est.n_1q_sequential, est.n_2q_sequential)),
    });
    if let Some(r) = reference {
        rec["reference"] = serde_json::to_value(r).expect("reference serializes");
    }
    out.record("runtime", &rec, None)
}

fn counts_mode(cfg: &ExperimentConfig, counts: PathCounts, profile: &DeviceProfile) -> Result<RuntimeEstimate, CliError> {
    let groups = match cfg.groups {
        Some(g) => g,
        None => match &cfg.problem {
            Some(_) => group_terms(&problem(cfg)?.hamiltonian).len(),
            None => return Err(CliError::Usage("counts mode needs --groups or a problem".into())),
        },
    };
    Ok(estimate(counts, profile, groups, cfg.shots, cfg.evaluations))
}
