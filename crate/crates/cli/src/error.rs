use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flag, name, key or value.
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] mddm::Error),
    #[error("cannot write {}: {source}", path.display())]
    Output {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError::Usage(message.into())
    }

    /// 2 for usage errors, 3 for data and I/O errors, 4 for broken
    /// internal contracts.
    pub fn exit_code(&self) -> i32 {
        use mddm::Error as E;
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(E::ParameterDomain { .. } | E::Config(_)) => 2,
            CliError::Core(E::Schema(_) | E::Csv { .. } | E::Io(_)) => 3,
            CliError::Output { .. } => 3,
            CliError::Core(E::Contract(_) | E::NotReady) => 4,
        }
    }
}

pub(crate) fn output_error(path: &std::path::Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Output {
        path: path.to_owned(),
        source,
    }
}
