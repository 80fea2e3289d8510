//! Parametrized ansatzes built from Pauli-exponential generators.
//!
//! Every generator `P` with parameter `theta` implements `exp(-i theta P / 2)`,
//! so all-zero parameters give the identity. Generators are stored in the
//! order they act on the state.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::gate::Gate;
use crate::pauli::{Pauli, PauliAction, PauliString};
use crate::scalar::Real;
use crate::state::StateVector;

#[derive(Debug, Clone, PartialEq)]
pub struct Generator<T> {
    pub pauli: PauliString<T>,
    pub param: usize,
    action: PauliAction,
}

impl<T: Real> Generator<T> {
    pub fn new(pauli: PauliString<T>, param: usize) -> Self {
        let action = pauli.action();
        Self { pauli, param, action }
    }

    pub fn action(&self) -> &PauliAction {
        &self.action
    }
}

/// Which generators of the XY-ansatz to keep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Reduction {
    /// First factor group only.
    Half,
    /// Keep generators whose `Y`-qubit sits at most `width` sites above the
    /// `X`-qubit; with `wrap` the distance is taken modulo `N`.
    Band { width: usize, wrap: bool },
}

impl Reduction {
    /// Nearest-neighbour band, `k = l + 1`.
    pub fn chain(wrap: bool) -> Self {
        Reduction::Band { width: 1, wrap }
    }
}

/// Ansatz families addressable by name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AnsatzKind {
    Xy,
    ReducedXy(Reduction),
    MeanField,
}

impl AnsatzKind {
    pub fn build<T: Real>(&self, n: usize) -> Result<Ansatz<T>> {
        match *self {
            AnsatzKind::Xy => xy_ansatz(n),
            AnsatzKind::ReducedXy(rule) => reduced_xy_ansatz(n, rule),
            AnsatzKind::MeanField => mean_field_ansatz(n),
        }
    }
}

impl fmt::Display for AnsatzKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AnsatzKind::Xy => write!(f, "xy"),
            AnsatzKind::MeanField => write!(f, "meanfield"),
            AnsatzKind::ReducedXy(Reduction::Half) => write!(f, "xy-half"),
            AnsatzKind::ReducedXy(Reduction::Band { width: 1, wrap }) => {
                write!(f, "xy-chain{}", if *wrap { ":wrap" } else { "" })
            }
            AnsatzKind::ReducedXy(Reduction::Band { width, wrap }) => {
                write!(f, "xy-band:{width}{}", if *wrap { ":wrap" } else { "" })
            }
        }
    }
}

impl FromStr for AnsatzKind {
    type Err = Error;

    /// `xy`, `xy-half`, `xy-band:<w>[:wrap]`, `xy-chain[:wrap]`, `meanfield`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.trim().split(':').collect();
        let wrap_flag = |rest: &[&str]| match rest {
            [] => Ok(false),
            ["wrap"] => Ok(true),
            _ => Err(Error::argument(format!("unknown ansatz option in {s:?}"))),
        };
        match parts.as_slice() {
            ["xy"] => Ok(AnsatzKind::Xy),
            ["xy-half"] => Ok(AnsatzKind::ReducedXy(Reduction::Half)),
            ["meanfield"] | ["mean-field"] => Ok(AnsatzKind::MeanField),
            ["xy-chain", rest @ ..] => Ok(AnsatzKind::ReducedXy(Reduction::chain(wrap_flag(rest)?))),
            ["xy-band", width, rest @ ..] => {
                let width: usize = width
                    .parse()
                    .map_err(|_| Error::argument(format!("invalid band width in {s:?}")))?;
                if width == 0 {
                    return Err(Error::argument("band width must be at least 1"));
                }
                Ok(AnsatzKind::ReducedXy(Reduction::Band {
                    width,
                    wrap: wrap_flag(rest)?,
                }))
            }
            _ => Err(Error::argument(format!("unknown ansatz {s:?}"))),
        }
    }
}

/// An ordered product of Pauli exponentials.
#[derive(Debug, Clone, PartialEq)]
pub struct Ansatz<T> {
    n_qubits: usize,
    n_params: usize,
    generators: Vec<Generator<T>>,
}

impl<T: Real> Ansatz<T> {
    /// Parameter indices must cover `0..n_params`, each used at least once.
    pub fn new(n_qubits: usize, generators: Vec<Generator<T>>) -> Result<Self> {
        let n_params = generators.iter().map(|g| g.param + 1).max().unwrap_or(0);
        let mut used = vec![false; n_params];
        for g in &generators {
            g.pauli.check_range(n_qubits)?;
            used[g.param] = true;
        }
        if let Some(p) = used.iter().position(|u| !u) {
            return Err(Error::argument(format!("parameter {p} has no generator")));
        }
        Ok(Self {
            n_qubits,
            n_params,
            generators,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn n_params(&self) -> usize {
        self.n_params
    }

    pub fn generators(&self) -> &[Generator<T>] {
        &self.generators
    }

    pub fn check_params(&self, params: &[T]) -> Result<()> {
        if params.len() != self.n_params {
            return Err(Error::argument(format!(
                "expected {} parameters, got {}",
                self.n_params,
                params.len()
            )));
        }
        Ok(())
    }

    /// Applies `U(params)` to `state` generator by generator. Matches the
    /// lowered circuit exactly, without materializing gates.
    pub fn apply(&self, params: &[T], state: &mut StateVector<T>) -> Result<()> {
        self.check_params(params)?;
        if state.n_qubits() != self.n_qubits {
            return Err(Error::argument(format!(
                "ansatz acts on {} qubits, state has {}",
                self.n_qubits,
                state.n_qubits()
            )));
        }
        for g in &self.generators {
            state.apply_pauli_rotation(&g.action, params[g.param]);
        }
        Ok(())
    }

    /// `U(params)|base>`.
    pub fn prepare(&self, params: &[T], base: &StateVector<T>) -> Result<StateVector<T>> {
        let mut s = base.clone();
        self.apply(params, &mut s)?;
        Ok(s)
    }
}

fn xy_generator<T: Real>(n: usize, y_qubit: usize, x_qubit: usize) -> PauliString<T> {
    let hub = n - 1;
    let mut factors = vec![(y_qubit, Pauli::Y), (x_qubit, Pauli::X)];
    if y_qubit != hub && x_qubit != hub {
        factors.push((hub, Pauli::Z));
    }
    PauliString::new(T::one(), factors).expect("distinct qubits")
}

/// `(y_qubit, x_qubit)` pairs of the XY-ansatz in application order: the
/// group with `Y` on the higher index acts first, then the group with `Y` on
/// the lower index; inside each group `l` ascends, then `k` ascends.
fn xy_pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    let first = (0..n).flat_map(move |l| (l + 1..n).map(move |k| (k, l)));
    let second = (0..n).flat_map(move |l| (l + 1..n).map(move |k| (l, k)));
    first.chain(second)
}

fn from_pairs<T: Real>(n: usize, pairs: impl Iterator<Item = (usize, usize)>) -> Result<Ansatz<T>> {
    let generators = pairs
        .enumerate()
        .map(|(p, (y, x))| Generator::new(xy_generator(n, y, x), p))
        .collect();
    Ansatz::new(n, generators)
}

/// The XY-ansatz: `N(N-1)` generators `Y_k X_l`, with a `Z` on the hub qubit
/// `N-1` whenever neither `k` nor `l` is the hub.
pub fn xy_ansatz<T: Real>(n: usize) -> Result<Ansatz<T>> {
    if n < 2 {
        return Err(Error::argument("XY-ansatz needs at least two qubits"));
    }
    from_pairs(n, xy_pairs(n))
}

/// Subset of the XY-ansatz selected by `rule`, keeping its order.
pub fn reduced_xy_ansatz<T: Real>(n: usize, rule: Reduction) -> Result<Ansatz<T>> {
    if n < 2 {
        return Err(Error::argument("XY-ansatz needs at least two qubits"));
    }
    let keep = move |(y, x): (usize, usize)| match rule {
        Reduction::Half => y > x,
        Reduction::Band { width, wrap } => {
            let d = if y > x { y - x } else if wrap { y + n - x } else { usize::MAX };
            d <= width
        }
    };
    if let Reduction::Band { width, .. } = rule {
        if width == 0 {
            return Err(Error::argument("band width must be at least 1"));
        }
    }
    from_pairs(n, xy_pairs(n).filter(move |&p| keep(p)))
}

/// Disjoint `X_{2j} Y_{2j+1}` exponentials, one parameter each. An odd last
/// qubit carries no gate.
pub fn mean_field_ansatz<T: Real>(n: usize) -> Result<Ansatz<T>> {
    if n < 2 {
        return Err(Error::argument("mean-field ansatz needs at least two qubits"));
    }
    let generators = (0..n / 2)
        .map(|j| {
            let p = PauliString::new(T::one(), [(2 * j, Pauli::X), (2 * j + 1, Pauli::Y)])
                .expect("distinct qubits");
            Generator::new(p, j)
        })
        .collect();
    Ansatz::new(n, generators)
}

/// Lowers every generator to basis changes, a CNOT ladder onto its largest
/// qubit, `Rz(theta)` there, and the mirrored un-computation.
pub fn lower_to_circuit<T: Real>(ansatz: &Ansatz<T>, params: &[T]) -> Result<Circuit<T>> {
    ansatz.check_params(params)?;
    let mut c = Circuit::new(ansatz.n_qubits());
    c.param_slots = vec![Vec::new(); ansatz.n_params()];
    for g in ansatz.generators() {
        let factors: Vec<(usize, Pauli)> = g.pauli.factors().iter().map(|(&q, &p)| (q, p)).collect();
        for &(q, p) in &factors {
            match p {
                Pauli::X => c.gates.push(Gate::H(q)),
                Pauli::Y => {
                    c.gates.push(Gate::Sdg(q));
                    c.gates.push(Gate::H(q));
                }
                Pauli::Z => {}
            }
        }
        for w in factors.windows(2) {
            c.gates.push(Gate::Cnot {
                control: w[0].0,
                target: w[1].0,
            });
        }
        let carrier = factors.last().expect("non-empty generator").0;
        c.param_slots[g.param].push(c.gates.len());
        c.gates.push(Gate::Rz {
            qubit: carrier,
            angle: params[g.param],
        });
        for w in factors.windows(2).rev() {
            c.gates.push(Gate::Cnot {
                control: w[0].0,
                target: w[1].0,
            });
        }
        for &(q, p) in &factors {
            match p {
                Pauli::X => c.gates.push(Gate::H(q)),
                Pauli::Y => {
                    c.gates.push(Gate::H(q));
                    c.gates.push(Gate::S(q));
                }
                Pauli::Z => {}
            }
        }
    }
    Ok(c)
}
