use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid input: {0}")]
    Invalid(String),

    #[error(transparent)]
    Model(#[from] ctrw_core::Error),

    #[error("insufficient power: {n_paths} paths requested, verification needs at least {minimum}")]
    InsufficientPower { n_paths: u64, minimum: u64 },

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// 0 success, 1 verification failure, 2 invalid input.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Verification(_) => 1,
            CliError::Invalid(_) | CliError::Model(_) | CliError::InsufficientPower { .. } | CliError::Io(_) => 2,
        }
    }
}
