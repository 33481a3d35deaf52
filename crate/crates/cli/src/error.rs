use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// bad flags, config, files or data
    #[error("{0}")]
    Input(String),
    #[error("validation failed: {0}")]
    Validation(String),
    #[error("no feasible design: {0}")]
    Infeasible(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Input(_) => 2,
            CliError::Infeasible(_) => 3,
        }
    }
}

macro_rules! input_from {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::Input(e.to_string())
            }
        }
    )*};
}

input_from!(
    rdo_core::dataset::DataError,
    rdo_core::gpr::GprError,
    rdo_core::pce::PceError,
    std::io::Error
);
