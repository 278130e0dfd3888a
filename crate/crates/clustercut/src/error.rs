use std::path::Path;

use thiserror::Error;

/// Errors grouped by exit code: 1 for validation, 2 for runtime and numerical failures.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid input: {0}")]
    Validation(String),
    #[error("incomplete bundle:\n{}", .0.join("\n"))]
    IncompleteBundle(Vec<String>),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error(transparent)]
    Core(#[from] clustercut_core::Error),
}

pub type CliResult<T> = Result<T, CliError>;

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io { path: path.display().to_string(), source }
    }

    pub fn exit_code(&self) -> i32 {
        use clustercut_core::Error as E;
        match self {
            CliError::Validation(_) | CliError::IncompleteBundle(_) => 1,
            CliError::Io { .. } => 2,
            CliError::Core(e) => match root(e) {
                E::IllConditioned { .. } | E::BadNormalization { .. } | E::NotPhysical(_) | E::ImaginaryExpectation(_) => 2,
                _ => 1,
            },
        }
    }
}

fn root(e: &clustercut_core::Error) -> &clustercut_core::Error {
    match e {
        clustercut_core::Error::Job { source, .. } => root(source),
        e => e,
    }
}
