use thiserror::Error;

/// Exit codes: 0 pass, 1 verification failure, 2 input error, 3 resource
/// limit.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("input error: {0}")]
    Input(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("resource limit: {0}")]
    Resource(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Verification(_) => 1,
            CliError::Input(_) | CliError::Io(_) => 2,
            CliError::Resource(_) => 3,
        }
    }
}

impl From<gkz::Error> for CliError {
    fn from(e: gkz::Error) -> Self {
        use gkz::Error as E;
        let msg = e.to_string();
        match e {
            E::ResourceLimit(_) | E::InsufficientRadius { .. } => CliError::Resource(msg),
            E::MinimalityViolation(_)
            | E::NoPositiveFunctional { .. }
            | E::NonLatticeExponent(_)
            | E::AsymmetricTable(..) => CliError::Verification(msg),
            _ => CliError::Input(msg),
        }
    }
}
