use thiserror::Error;
use vqevo_core::Error as CoreError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(CoreError::Argument(_) | CoreError::NotBipartite { .. }) => 2,
            CliError::Core(CoreError::Capacity(_)) => 3,
            CliError::Core(
                CoreError::NonFiniteEnergy { .. } | CoreError::NoConvergence { .. } | CoreError::UndefinedFidelity,
            ) => 4,
            CliError::Io(_) => 1,
        }
    }
}
