use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot parse config: {0}")]
    Parse(String),
    #[error("invalid config:\n{0}")]
    Invalid(String),
    #[error("{0}")]
    Io(String),
    #[error(transparent)]
    Physics(#[from] lifshitz_core::Error),
    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    /// Process exit code: 1 for bad input, 3 for everything else.
    pub fn exit_code(&self) -> i32 {
        use lifshitz_core::Error as E;
        match self {
            CliError::Parse(_) | CliError::Invalid(_) => 1,
            CliError::Physics(E::InvalidParameter { .. })
            | CliError::Physics(E::DegenerateWavevector)
            | CliError::Physics(E::ClausiusMossottiDivergence { .. })
            | CliError::Physics(E::ResonantDenominator { .. }) => 1,
            CliError::Physics(E::NotConverged { .. }) => 2,
            _ => 3,
        }
    }
}
