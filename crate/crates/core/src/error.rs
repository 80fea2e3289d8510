use thiserror::Error;

/// Errors raised by the workbench.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A request exceeds the memory budget of the dense representation.
    #[error("capacity exceeded: {0}")]
    Capacity(String),

    /// Malformed or inconsistent input.
    #[error("invalid argument: {0}")]
    Argument(String),

    /// The optimizer met a non-finite energy.
    #[error("non-finite energy {energy} at parameters {params:?}")]
    NonFiniteEnergy { energy: f64, params: Vec<f64> },

    /// An iterative method failed to converge.
    #[error("no convergence: {message} (residuals {residuals:?})")]
    NoConvergence { message: String, residuals: Vec<f64> },

    /// The bond graph has an odd cycle, so no Néel two-colouring exists.
    #[error("lattice is not bipartite: odd cycle through sites {cycle:?}")]
    NotBipartite { cycle: Vec<usize> },

    /// Energy fidelity against a zero reference energy.
    #[error("energy fidelity is undefined for a zero reference energy")]
    UndefinedFidelity,
}

impl Error {
    pub(crate) fn argument(message: impl Into<String>) -> Self {
        Error::Argument(message.into())
    }

    pub(crate) fn capacity(message: impl Into<String>) -> Self {
        Error::Capacity(message.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
