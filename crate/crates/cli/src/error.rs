use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] lgx_core::Error),
    #[error("verification failed with {0} violation(s)")]
    Verification(usize),
}

impl From<lgx_core::OracleError> for CliError {
    fn from(e: lgx_core::OracleError) -> Self {
        CliError::Core(e.into())
    }
}

impl CliError {
    /// 1 usage or I/O, 2 oracle failure, 3 verification failure.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(lgx_core::Error::Oracle(_) | lgx_core::Error::NonPositiveReference { .. }) => 2,
            CliError::Verification(_) => 3,
            _ => 1,
        }
    }
}
