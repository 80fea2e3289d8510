//! Energy objectives with evaluation accounting.
//!
//! Every energy evaluation increments a counter. A gradient is charged two
//! evaluations per generator, the cost of the parameter-shift rule on a
//! device, whichever engine computes it.

use serde::{Deserialize, Serialize};

use crate::ansatz::Ansatz;
use crate::error::{Error, Result};
use crate::operator::PauliOperator;
use crate::pauli::matrix_element;
use crate::scalar::Real;
use crate::state::StateVector;

/// One logged energy evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryPoint<T> {
    /// 1-based position in the global evaluation count.
    pub evaluation: usize,
    pub energy: T,
}

/// Something the optimizer can minimize.
pub trait Objective<T: Real> {
    fn n_params(&self) -> usize;

    /// One counted evaluation, appended to the trajectory.
    fn energy(&mut self, params: &[T]) -> Result<T>;

    /// Gradient, charged to the evaluation counter but not logged in the
    /// trajectory.
    fn gradient(&mut self, params: &[T]) -> Result<Vec<T>>;

    fn n_evaluations(&self) -> usize;

    /// Evaluations charged per gradient call.
    fn evaluations_per_gradient(&self) -> usize;

    fn trajectory(&self) -> &[TrajectoryPoint<T>];
}

/// Shared bookkeeping for [`Objective`] implementations.
#[derive(Debug, Clone, Default)]
pub struct EvaluationLog<T> {
    evaluations: usize,
    trajectory: Vec<TrajectoryPoint<T>>,
}

impl<T: Real> EvaluationLog<T> {
    pub fn record(&mut self, energy: T) {
        self.evaluations += 1;
        self.trajectory.push(TrajectoryPoint {
            evaluation: self.evaluations,
            energy,
        });
    }

    pub fn charge(&mut self, evaluations: usize) {
        self.evaluations += evaluations;
    }

    pub fn evaluations(&self) -> usize {
        self.evaluations
    }

    pub fn trajectory(&self) -> &[TrajectoryPoint<T>] {
        &self.trajectory
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GradientMethod {
    /// `[E(theta + pi/2) - E(theta - pi/2)] / 2` per generator, each side a
    /// full state preparation.
    ParameterShift,
    /// The same derivative from one forward and one backward sweep.
    #[default]
    Adjoint,
}

/// Where the ansatz starts from.
#[derive(Debug, Clone)]
pub enum BaseState<'a, T> {
    /// A stored state, such as the frozen output of earlier cycles.
    Frozen(&'a StateVector<T>),
    /// Earlier layers re-executed from the initial state on every evaluation.
    Deep {
        initial: &'a StateVector<T>,
        layers: &'a [(Ansatz<T>, Vec<T>)],
    },
}

impl<T: Real> BaseState<'_, T> {
    pub fn materialize(&self) -> Result<StateVector<T>> {
        match self {
            BaseState::Frozen(s) => Ok((*s).clone()),
            BaseState::Deep { initial, layers } => {
                let mut s = (*initial).clone();
                for (ansatz, params) in layers.iter() {
                    ansatz.apply(params, &mut s)?;
                }
                Ok(s)
            }
        }
    }
}

/// `E(theta) = <base|U(theta)^dag H U(theta)|base>`.
pub fn energy<T: Real>(
    op: &PauliOperator<T>,
    ansatz: &Ansatz<T>,
    params: &[T],
    base: &StateVector<T>,
) -> Result<T> {
    let s = ansatz.prepare(params, base)?;
    op.expectation(&s)
}

/// Parameter-shift gradient. Generators sharing a parameter contribute
/// additively.
pub fn parameter_shift_gradient<T: Real>(
    op: &PauliOperator<T>,
    ansatz: &Ansatz<T>,
    params: &[T],
    base: &StateVector<T>,
) -> Result<Vec<T>> {
    ansatz.check_params(params)?;
    check_sizes(op, ansatz, base)?;
    let shift = T::FRAC_PI_2();
    let gens = ansatz.generators();
    let mut grad = vec![T::zero(); ansatz.n_params()];
    let mut prefix = base.clone();
    for (i, g) in gens.iter().enumerate() {
        let theta = params[g.param];
        let side = |delta: T| {
            let mut s = prefix.clone();
            s.apply_pauli_rotation(g.action(), theta + delta);
            for later in &gens[i + 1..] {
                s.apply_pauli_rotation(later.action(), params[later.param]);
            }
            op.expectation_of(s.amplitudes()).re
        };
        let plus = side(shift);
        let minus = side(-shift);
        grad[g.param] += (plus - minus) / T::of(2.0);
        prefix.apply_pauli_rotation(g.action(), theta);
    }
    Ok(grad)
}

/// Reverse-mode gradient: `dE/dtheta_i = Im <lambda_i | P_i | psi_i>` with
/// `lambda` the back-propagated `H|psi>`.
pub fn adjoint_gradient<T: Real>(
    op: &PauliOperator<T>,
    ansatz: &Ansatz<T>,
    params: &[T],
    base: &StateVector<T>,
) -> Result<Vec<T>> {
    ansatz.check_params(params)?;
    check_sizes(op, ansatz, base)?;
    let mut psi = ansatz.prepare(params, base)?;
    let mut lambda = op.apply_to_state(&psi)?;
    let mut grad = vec![T::zero(); ansatz.n_params()];
    for g in ansatz.generators().iter().rev() {
        let z = matrix_element(lambda.amplitudes(), g.action(), psi.amplitudes());
        grad[g.param] += z.im;
        let back = -params[g.param];
        psi.apply_pauli_rotation(g.action(), back);
        lambda.apply_pauli_rotation(g.action(), back);
    }
    Ok(grad)
}

fn check_sizes<T: Real>(op: &PauliOperator<T>, ansatz: &Ansatz<T>, base: &StateVector<T>) -> Result<()> {
    if op.n_qubits() != ansatz.n_qubits() || base.n_qubits() != ansatz.n_qubits() {
        return Err(Error::argument(format!(
            "size mismatch: operator {} qubits, ansatz {}, state {}",
            op.n_qubits(),
            ansatz.n_qubits(),
            base.n_qubits()
        )));
    }
    Ok(())
}

/// VQE energy of an ansatz over a base state, with evaluation accounting.
#[derive(Debug, Clone)]
pub struct VqeObjective<'a, T> {
    op: &'a PauliOperator<T>,
    ansatz: &'a Ansatz<T>,
    base: BaseState<'a, T>,
    method: GradientMethod,
    log: EvaluationLog<T>,
}

impl<'a, T: Real> VqeObjective<'a, T> {
    pub fn new(
        op: &'a PauliOperator<T>,
        ansatz: &'a Ansatz<T>,
        base: BaseState<'a, T>,
        method: GradientMethod,
    ) -> Self {
        Self {
            op,
            ansatz,
            base,
            method,
            log: EvaluationLog::default(),
        }
    }

    pub fn ansatz(&self) -> &Ansatz<T> {
        self.ansatz
    }

    /// The state `U(params)|base>`.
    pub fn state(&self, params: &[T]) -> Result<StateVector<T>> {
        self.ansatz.prepare(params, &self.base.materialize()?)
    }
}

impl<T: Real> Objective<T> for VqeObjective<'_, T> {
    fn n_params(&self) -> usize {
        self.ansatz.n_params()
    }

    fn energy(&mut self, params: &[T]) -> Result<T> {
        let base = self.base.materialize()?;
        let e = energy(self.op, self.ansatz, params, &base)?;
        self.log.record(e);
        Ok(e)
    }

    fn gradient(&mut self, params: &[T]) -> Result<Vec<T>> {
        let base = self.base.materialize()?;
        let g = match self.method {
            GradientMethod::ParameterShift => parameter_shift_gradient(self.op, self.ansatz, params, &base)?,
            GradientMethod::Adjoint => adjoint_gradient(self.op, self.ansatz, params, &base)?,
        };
        self.log.charge(self.evaluations_per_gradient());
        Ok(g)
    }

    fn n_evaluations(&self) -> usize {
        self.log.evaluations()
    }

    fn evaluations_per_gradient(&self) -> usize {
        2 * self.ansatz.generators().len()
    }

    fn trajectory(&self) -> &[TrajectoryPoint<T>] {
        self.log.trajectory()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ansatz::{mean_field_ansatz, reduced_xy_ansatz, xy_ansatz, Reduction};
    use crate::hamiltonian::{build_heisenberg, build_mean_field, neel_state, alternating_bits};
    use crate::lattice::{build_lattice, Boundary};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ring(n: usize) -> crate::lattice::Lattice {
        build_lattice(&[n], Boundary::Periodic).unwrap()
    }

    /// Central differences, independent of both gradient engines.
    fn finite_difference(op: &PauliOperator<f64>, a: &Ansatz<f64>, p: &[f64], base: &StateVector<f64>) -> Vec<f64> {
        let h = 1e-5;
        (0..p.len())
            .map(|j| {
                let mut up = p.to_vec();
                let mut down = p.to_vec();
                up[j] += h;
                down[j] -= h;
                (energy(op, a, &up, base).unwrap() - energy(op, a, &down, base).unwrap()) / (2.0 * h)
            })
            .collect()
    }

    #[test]
    fn mean_field_pair_closed_form() {
        let h = build_mean_field::<f64>(2).unwrap();
        let op = PauliOperator::new(&h);
        let a = mean_field_ansatz::<f64>(2).unwrap();
        let base = StateVector::init_basis_state(2, &alternating_bits(2)).unwrap();
        for theta in [0.0, 0.4, 1.0, 2.5] {
            let e = energy(&op, &a, &[theta], &base).unwrap();
            assert!((e - (-1.0 - 2.0 * f64::sin(theta))).abs() < 1e-12);
        }
        let g = parameter_shift_gradient(&op, &a, &[0.0], &base).unwrap();
        assert!((g[0] + 2.0).abs() < 1e-12);
        let g = adjoint_gradient(&op, &a, &[0.0], &base).unwrap();
        assert!((g[0] + 2.0).abs() < 1e-12);
    }

    #[test]
    fn shift_and_adjoint_agree_with_finite_differences() {
        let l = ring(6);
        let h = build_heisenberg::<f64>(&l, 1.0);
        let op = PauliOperator::new(&h);
        let (_, base) = neel_state::<f64>(&l).unwrap();
        let a = reduced_xy_ansatz::<f64>(6, Reduction::Half).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let p: Vec<f64> = (0..a.n_params()).map(|_| rng.gen_range(0.0..std::f64::consts::TAU)).collect();
            let fd = finite_difference(&op, &a, &p, &base);
            let ps = parameter_shift_gradient(&op, &a, &p, &base).unwrap();
            let adj = adjoint_gradient(&op, &a, &p, &base).unwrap();
            for j in 0..p.len() {
                assert!((ps[j] - fd[j]).abs() < 1e-6, "component {j}: {} vs {}", ps[j], fd[j]);
                assert!((ps[j] - adj[j]).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn commuting_generator_has_zero_gradient() {
        // Z0 Z1 commutes with H = Z0 Z1 and the basis state is its eigenstate.
        use crate::ansatz::Generator;
        use crate::pauli::{Pauli, PauliString};
        use crate::hamiltonian::Hamiltonian;
        let zz = PauliString::pair(1.0f64, Pauli::Z, 0, 1).unwrap();
        let h = Hamiltonian::new(2, vec![zz.clone()]).unwrap();
        let op = PauliOperator::new(&h);
        let a = Ansatz::new(2, vec![Generator::new(zz, 0)]).unwrap();
        let base = StateVector::init_basis_state(2, "01").unwrap();
        let g = parameter_shift_gradient(&op, &a, &[0.8], &base).unwrap();
        assert!(g[0].abs() < 1e-10);
    }

    #[test]
    fn accounting_charges_two_per_generator() {
        let l = ring(4);
        let h = build_heisenberg::<f64>(&l, 1.0);
        let op = PauliOperator::new(&h);
        let (_, base) = neel_state::<f64>(&l).unwrap();
        let a = xy_ansatz::<f64>(4).unwrap();
        let mut obj = VqeObjective::new(&op, &a, BaseState::Frozen(&base), GradientMethod::ParameterShift);
        let p = vec![0.1; 12];
        obj.energy(&p).unwrap();
        obj.gradient(&p).unwrap();
        obj.energy(&p).unwrap();
        assert_eq!(obj.n_evaluations(), 2 + 24);
        let idx: Vec<usize> = obj.trajectory().iter().map(|t| t.evaluation).collect();
        assert_eq!(idx, vec![1, 26]);
    }

    #[test]
    fn deep_base_matches_frozen_base() {
        let l = ring(4);
        let h = build_heisenberg::<f64>(&l, 1.0);
        let op = PauliOperator::new(&h);
        let (_, init) = neel_state::<f64>(&l).unwrap();
        let a = xy_ansatz::<f64>(4).unwrap();
        let theta: Vec<f64> = (0..12).map(|k| 0.1 * k as f64).collect();
        let frozen = a.prepare(&theta, &init).unwrap();
        let layers = vec![(a.clone(), theta)];
        let p = vec![0.05f64; 12];
        let mut deep = VqeObjective::new(&op, &a, BaseState::Deep { initial: &init, layers: &layers }, GradientMethod::Adjoint);
        let mut fro = VqeObjective::new(&op, &a, BaseState::Frozen(&frozen), GradientMethod::Adjoint);
        assert!((deep.energy(&p).unwrap() - fro.energy(&p).unwrap()).abs() < 1e-12);
    }
}
