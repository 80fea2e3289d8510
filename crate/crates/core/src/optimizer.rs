//! Quasi-Newton minimization with an inverse-Hessian BFGS update and a
//! backtracking Armijo line search.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::objective::{Objective, TrajectoryPoint};
use crate::scalar::Real;

const ARMIJO_C1: f64 = 1e-4;
const CONTRACTION: f64 = 0.5;
const INITIAL_STEP: f64 = 1.0;
const MAX_BACKTRACKS: usize = 60;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    /// Stop when the gradient infinity-norm drops below this.
    pub grad_tol: f64,
    /// Stop when an accepted step lowers the energy by less than this.
    pub energy_tol: f64,
    /// Accepted-step limit; `None` means ten per parameter.
    pub max_iterations: Option<usize>,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            grad_tol: 1e-6,
            energy_tol: 1e-9,
            max_iterations: None,
        }
    }
}

impl OptimizerConfig {
    pub fn iteration_limit(&self, n_params: usize) -> usize {
        self.max_iterations.unwrap_or(10 * n_params)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StopReason {
    GradientTolerance,
    EnergyTolerance,
    IterationLimit,
    LineSearchFailed,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizerResult<T> {
    pub best_params: Vec<T>,
    pub best_energy: T,
    /// Accepted steps.
    pub n_iterations: usize,
    pub n_evaluations: usize,
    /// Evaluations made outside gradients (initial point plus line search).
    pub n_line_search_evaluations: usize,
    pub n_gradients: usize,
    pub converged: bool,
    pub stop_reason: StopReason,
    pub trajectory: Vec<TrajectoryPoint<T>>,
}

fn finite_or_err<T: Real>(energy: T, params: &[T]) -> Result<T> {
    if energy.is_finite() {
        Ok(energy)
    } else {
        Err(Error::NonFiniteEnergy {
            energy: energy.to_f64_lossy(),
            params: params.iter().map(|p| p.to_f64_lossy()).collect(),
        })
    }
}

fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).map(|(&x, &y)| x * y).sum()
}

fn inf_norm<T: Real>(v: &[T]) -> T {
    v.iter().fold(T::zero(), |m, x| m.max(x.abs()))
}

/// Dense symmetric inverse-Hessian approximation, row-major.
struct InverseHessian<T> {
    n: usize,
    data: Vec<T>,
    fresh: bool,
}

impl<T: Real> InverseHessian<T> {
    fn identity(n: usize) -> Self {
        let mut data = vec![T::zero(); n * n];
        for i in 0..n {
            data[i * n + i] = T::one();
        }
        Self { n, data, fresh: true }
    }

    fn reset(&mut self) {
        *self = Self::identity(self.n);
    }

    fn times(&self, v: &[T]) -> Vec<T> {
        self.data.chunks_exact(self.n).map(|row| dot(row, v)).collect()
    }

    /// `H <- (I - r s y^T) H (I - r y s^T) + r s s^T` with `r = 1 / y^T s`.
    /// Skipped when the curvature condition fails.
    fn update(&mut self, s: &[T], y: &[T]) {
        let sy = dot(s, y);
        if !(sy > T::epsilon() * dot(y, y).sqrt() * dot(s, s).sqrt()) {
            return;
        }
        if self.fresh {
            let scale = sy / dot(y, y);
            for x in &mut self.data {
                *x *= scale;
            }
            self.fresh = false;
        }
        let n = self.n;
        let r = T::one() / sy;
        let hy = self.times(y);
        let yhy = dot(y, &hy);
        let coeff = (T::one() + r * yhy) * r;
        for i in 0..n {
            for j in 0..n {
                self.data[i * n + j] += coeff * s[i] * s[j] - r * (hy[i] * s[j] + s[i] * hy[j]);
            }
        }
    }
}

/// Minimizes `objective` from `init`. Every accepted step satisfies the
/// Armijo condition, so accepted energies never increase.
pub fn minimize<T: Real, O: Objective<T> + ?Sized>(
    objective: &mut O,
    init: &[T],
    config: &OptimizerConfig,
) -> Result<OptimizerResult<T>> {
    let n = objective.n_params();
    if init.len() != n {
        return Err(Error::argument(format!("expected {n} initial parameters, got {}", init.len())));
    }
    let limit = config.iteration_limit(n);
    let grad_tol = T::of(config.grad_tol);
    let energy_tol = T::of(config.energy_tol);
    let c1 = T::of(ARMIJO_C1);
    let contraction = T::of(CONTRACTION);

    let mut x = init.to_vec();
    let mut fx = finite_or_err(objective.energy(&x)?, &x)?;
    let mut line_evals = 1usize;
    let mut n_gradients = 0usize;
    let mut iterations = 0usize;
    let mut hinv = InverseHessian::identity(n);

    let stop = if limit == 0 {
        StopReason::IterationLimit
    } else {
        let mut g = objective.gradient(&x)?;
        n_gradients += 1;
        loop {
            if inf_norm(&g) < grad_tol {
                break StopReason::GradientTolerance;
            }
            if iterations >= limit {
                break StopReason::IterationLimit;
            }
            let mut d: Vec<T> = hinv.times(&g).into_iter().map(|v| -v).collect();
            let mut slope = dot(&g, &d);
            if !(slope < T::zero()) {
                hinv.reset();
                d = g.iter().map(|&v| -v).collect();
                slope = dot(&g, &d);
            }
            let mut alpha = T::of(INITIAL_STEP);
            let mut accepted = None;
            for _ in 0..MAX_BACKTRACKS {
                let trial: Vec<T> = x.iter().zip(&d).map(|(&xi, &di)| xi + alpha * di).collect();
                let ft = finite_or_err(objective.energy(&trial)?, &trial)?;
                line_evals += 1;
                if ft <= fx + c1 * alpha * slope {
                    accepted = Some((trial, ft));
                    break;
                }
                alpha *= contraction;
            }
            let Some((x_new, f_new)) = accepted else {
                break StopReason::LineSearchFailed;
            };
            let g_new = objective.gradient(&x_new)?;
            n_gradients += 1;
            let s: Vec<T> = x_new.iter().zip(&x).map(|(&a, &b)| a - b).collect();
            let y: Vec<T> = g_new.iter().zip(&g).map(|(&a, &b)| a - b).collect();
            let improvement = fx - f_new;
            iterations += 1;
            x = x_new;
            fx = f_new;
            g = g_new;
            if improvement < energy_tol {
                break StopReason::EnergyTolerance;
            }
            hinv.update(&s, &y);
        }
    };

    Ok(OptimizerResult {
        best_params: x,
        best_energy: fx,
        n_iterations: iterations,
        n_evaluations: objective.n_evaluations(),
        n_line_search_evaluations: line_evals,
        n_gradients,
        converged: matches!(stop, StopReason::GradientTolerance | StopReason::EnergyTolerance),
        stop_reason: stop,
        trajectory: objective.trajectory().to_vec(),
    })
}

/// `m` parameters drawn uniformly from `[0, 2 pi)`.
pub fn random_params<T: Real, R: Rng + ?Sized>(m: usize, rng: &mut R) -> Vec<T> {
    (0..m).map(|_| T::of(rng.gen::<f64>() * std::f64::consts::TAU)).collect()
}

/// Objective from closures, for problems outside the state-vector setting.
pub struct FnObjective<T, F, G> {
    n_params: usize,
    energy: F,
    gradient: G,
    log: crate::objective::EvaluationLog<T>,
}

impl<T: Real, F, G> FnObjective<T, F, G>
where
    F: FnMut(&[T]) -> T,
    G: FnMut(&[T]) -> Vec<T>,
{
    pub fn new(n_params: usize, energy: F, gradient: G) -> Self {
        Self {
            n_params,
            energy,
            gradient,
            log: Default::default(),
        }
    }
}

impl<T: Real, F, G> Objective<T> for FnObjective<T, F, G>
where
    F: FnMut(&[T]) -> T,
    G: FnMut(&[T]) -> Vec<T>,
{
    fn n_params(&self) -> usize {
        self.n_params
    }

    fn energy(&mut self, params: &[T]) -> Result<T> {
        let e = (self.energy)(params);
        self.log.record(e);
        Ok(e)
    }

    fn gradient(&mut self, params: &[T]) -> Result<Vec<T>> {
        self.log.charge(self.evaluations_per_gradient());
        Ok((self.gradient)(params))
    }

    fn n_evaluations(&self) -> usize {
        self.log.evaluations()
    }

    fn evaluations_per_gradient(&self) -> usize {
        2 * self.n_params
    }

    fn trajectory(&self) -> &[TrajectoryPoint<T>] {
        self.log.trajectory()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    fn pair_objective() -> FnObjective<f64, impl FnMut(&[f64]) -> f64, impl FnMut(&[f64]) -> Vec<f64>> {
        FnObjective::new(1, |p: &[f64]| -1.0 - 2.0 * p[0].sin(), |p: &[f64]| vec![-2.0 * p[0].cos()])
    }

    #[test]
    fn closed_form_pair_reaches_singlet() {
        let mut obj = pair_objective();
        let r = minimize(&mut obj, &[0.0], &OptimizerConfig::default()).unwrap();
        assert!((r.best_params[0] - FRAC_PI_2).abs() < 1e-6, "{:?}", r.best_params);
        assert!((r.best_energy + 3.0).abs() < 1e-9);
        assert!(r.converged);
    }

    #[test]
    fn start_at_minimum_takes_no_step() {
        let mut obj = pair_objective();
        let r = minimize(&mut obj, &[FRAC_PI_2], &OptimizerConfig::default()).unwrap();
        assert!(r.converged);
        assert_eq!(r.n_iterations, 0);
        assert_eq!(r.best_energy, -3.0);
    }

    #[test]
    fn rosenbrock_and_accounting() {
        let f = |p: &[f64]| (1.0 - p[0]).powi(2) + 100.0 * (p[1] - p[0] * p[0]).powi(2);
        let g = |p: &[f64]| {
            vec![
                -2.0 * (1.0 - p[0]) - 400.0 * p[0] * (p[1] - p[0] * p[0]),
                200.0 * (p[1] - p[0] * p[0]),
            ]
        };
        let mut obj = FnObjective::new(2, f, g);
        let cfg = OptimizerConfig { max_iterations: Some(500), ..Default::default() };
        let r = minimize(&mut obj, &[-1.2, 1.0], &cfg).unwrap();
        assert!(r.best_energy < 1e-8, "{}", r.best_energy);
        assert_eq!(r.n_evaluations, r.n_line_search_evaluations + 2 * 2 * r.n_gradients);
        let accepted: Vec<f64> = r.trajectory.iter().map(|t| t.energy).collect();
        let min = accepted.iter().cloned().fold(f64::INFINITY, f64::min);
        assert_eq!(min, r.best_energy);
        assert!(r.trajectory.windows(2).all(|w| w[0].evaluation < w[1].evaluation));
    }

    #[test]
    fn non_finite_energy_is_reported() {
        let mut obj = FnObjective::new(1, |p: &[f64]| if p[0] > 0.5 { f64::NAN } else { -p[0] }, |_: &[f64]| vec![-1.0]);
        match minimize(&mut obj, &[0.0], &OptimizerConfig::default()) {
            Err(Error::NonFiniteEnergy { params, .. }) => assert_eq!(params, vec![1.0]),
            other => panic!("expected numerical error, got {other:?}"),
        }
    }

    #[test]
    fn zero_iteration_budget() {
        let mut obj = pair_objective();
        let cfg = OptimizerConfig { max_iterations: Some(0), ..Default::default() };
        let r = minimize(&mut obj, &[0.3], &cfg).unwrap();
        assert_eq!(r.best_params, vec![0.3]);
        assert_eq!(r.n_gradients, 0);
        assert!(!r.converged);
    }

    #[test]
    fn single_precision_objective() {
        let mut obj = FnObjective::new(1, |p: &[f32]| -1.0 - 2.0 * p[0].sin(), |p: &[f32]| vec![-2.0 * p[0].cos()]);
        let cfg = OptimizerConfig { grad_tol: 1e-4, energy_tol: 1e-7, max_iterations: Some(50) };
        let r = minimize(&mut obj, &[0.0f32], &cfg).unwrap();
        assert!((r.best_energy + 3.0).abs() < 1e-5);
    }
}
