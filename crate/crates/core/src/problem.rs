//! Textual problem descriptions such as `ring:12`, `ladder:13x2`,
//! `cube:3x3x4:periodic`, `meanfield:5` or `random:6:seed=7`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hamiltonian::{alternating_bits, build_heisenberg, build_mean_field, build_random_hamiltonian, neel_bits, Hamiltonian};
use crate::lattice::{build_lattice, Boundary, Lattice};
use crate::scalar::Real;
use crate::state::StateVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LatticeKind {
    /// Periodic 1D.
    Ring,
    /// Open 1D.
    Chain,
    Ladder,
    Square,
    Cube,
}

impl LatticeKind {
    fn name(self) -> &'static str {
        match self {
            LatticeKind::Ring => "ring",
            LatticeKind::Chain => "chain",
            LatticeKind::Ladder => "ladder",
            LatticeKind::Square => "square",
            LatticeKind::Cube => "cube",
        }
    }

    fn rank(self) -> usize {
        match self {
            LatticeKind::Ring | LatticeKind::Chain => 1,
            LatticeKind::Ladder | LatticeKind::Square => 2,
            LatticeKind::Cube => 3,
        }
    }

    fn default_boundary(self) -> Boundary {
        match self {
            LatticeKind::Ring => Boundary::Periodic,
            _ => Boundary::Open,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ProblemSpec {
    /// Heisenberg model with unit coupling on a lattice.
    Heisenberg {
        lattice: LatticeKind,
        dims: Vec<usize>,
        boundary: Boundary,
    },
    MeanField { n: usize },
    Random { n: usize, seed: u64 },
}

impl ProblemSpec {
    pub fn n_qubits(&self) -> usize {
        match self {
            ProblemSpec::Heisenberg { dims, .. } => dims.iter().product(),
            ProblemSpec::MeanField { n } | ProblemSpec::Random { n, .. } => *n,
        }
    }

    pub fn lattice(&self) -> Result<Option<Lattice>> {
        match self {
            ProblemSpec::Heisenberg { dims, boundary, .. } => Ok(Some(build_lattice(dims, *boundary)?)),
            _ => Ok(None),
        }
    }

    pub fn build<T: Real>(&self) -> Result<Problem<T>> {
        let (hamiltonian, reference_bits) = match self {
            ProblemSpec::Heisenberg { dims, boundary, .. } => {
                let lattice = build_lattice(dims, *boundary)?;
                let bits = match neel_bits(&lattice) {
                    Ok(b) => b,
                    Err(Error::NotBipartite { .. }) => alternating_bits(lattice.n_sites()),
                    Err(e) => return Err(e),
                };
                (build_heisenberg(&lattice, T::one()), bits)
            }
            ProblemSpec::MeanField { n } => (build_mean_field(*n)?, alternating_bits(*n)),
            ProblemSpec::Random { n, seed } => (build_random_hamiltonian(*n, *seed)?, alternating_bits(*n)),
        };
        Ok(Problem {
            spec: self.clone(),
            hamiltonian,
            reference_bits,
        })
    }
}

impl fmt::Display for ProblemSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProblemSpec::Heisenberg { lattice, dims, boundary } => {
                let dims: Vec<String> = dims.iter().map(|d| d.to_string()).collect();
                write!(f, "{}:{}", lattice.name(), dims.join("x"))?;
                if *boundary != lattice.default_boundary() {
                    let b = match boundary {
                        Boundary::Open => "open",
                        Boundary::Periodic => "periodic",
                    };
                    write!(f, ":{b}")?;
                }
                Ok(())
            }
            ProblemSpec::MeanField { n } => write!(f, "meanfield:{n}"),
            ProblemSpec::Random { n, seed } => write!(f, "random:{n}:seed={seed}"),
        }
    }
}

fn parse_count(s: &str, what: &str) -> Result<usize> {
    s.trim()
        .parse::<usize>()
        .map_err(|_| Error::argument(format!("invalid {what} '{s}'")))
}

impl FromStr for ProblemSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut parts = s.trim().split(':');
        let kind = parts.next().unwrap_or_default().to_ascii_lowercase();
        let size = parts
            .next()
            .ok_or_else(|| Error::argument(format!("problem '{s}' is missing a size")))?;
        let rest: Vec<&str> = parts.collect();
        let lattice = match kind.as_str() {
            "ring" => Some(LatticeKind::Ring),
            "chain" => Some(LatticeKind::Chain),
            "ladder" => Some(LatticeKind::Ladder),
            "square" => Some(LatticeKind::Square),
            "cube" => Some(LatticeKind::Cube),
            _ => None,
        };
        if let Some(lattice) = lattice {
            let dims = size
                .split('x')
                .map(|d| parse_count(d, "lattice extent"))
                .collect::<Result<Vec<_>>>()?;
            if dims.len() != lattice.rank() {
                return Err(Error::argument(format!(
                    "{} needs {} extents, got '{size}'",
                    lattice.name(),
                    lattice.rank()
                )));
            }
            if lattice == LatticeKind::Ladder && dims[1] != 2 {
                return Err(Error::argument(format!("a ladder has two legs, got '{size}'")));
            }
            let boundary = match rest.as_slice() {
                [] => lattice.default_boundary(),
                ["open"] => Boundary::Open,
                ["periodic"] => Boundary::Periodic,
                _ => return Err(Error::argument(format!("unknown boundary in '{s}'"))),
            };
            build_lattice(&dims, boundary)?;
            return Ok(ProblemSpec::Heisenberg { lattice, dims, boundary });
        }
        let n = parse_count(size, "qubit count")?;
        if n < 2 {
            return Err(Error::argument(format!("'{s}' needs at least two qubits")));
        }
        match kind.as_str() {
            "meanfield" if rest.is_empty() => Ok(ProblemSpec::MeanField { n }),
            "random" => {
                let seed = match rest.as_slice() {
                    [] => 0,
                    [opt] => opt
                        .strip_prefix("seed=")
                        .and_then(|v| v.parse().ok())
                        .ok_or_else(|| Error::argument(format!("invalid random option '{opt}'")))?,
                    _ => return Err(Error::argument(format!("too many options in '{s}'"))),
                };
                Ok(ProblemSpec::Random { n, seed })
            }
            _ => Err(Error::argument(format!("unknown problem '{s}'"))),
        }
    }
}

/// A Hamiltonian with its natural product starting state.
#[derive(Debug, Clone)]
pub struct Problem<T> {
    pub spec: ProblemSpec,
    pub hamiltonian: Hamiltonian<T>,
    /// Néel bits on bipartite lattices; alternating bits by index otherwise.
    pub reference_bits: String,
}

impl<T: Real> Problem<T> {
    pub fn n_qubits(&self) -> usize {
        self.hamiltonian.n_qubits()
    }

    pub fn reference_state(&self) -> Result<StateVector<T>> {
        StateVector::init_basis_state(self.n_qubits(), &self.reference_bits)
    }
}
