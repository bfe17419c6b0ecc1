use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid chain spec: {0}")]
    InvalidSpec(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("operation requires the {expected} model")]
    WrongModel { expected: &'static str },

    #[error("a singlet series needs an even number of sites, got {0}")]
    OddSingletChain(usize),

    #[error("{sites} sites exceed the exact-diagonalization cap of {cap}")]
    DimensionCap { sites: usize, cap: usize },

    #[error("channel state has no definite parity (<P> = {0})")]
    IndefiniteParity(f64),

    #[error("{0} did not converge")]
    NotConverged(&'static str),

    #[error("interference term has imaginary part {0:e}")]
    ImaginaryResidual(f64),

    #[error("Choi matrix violates {property} by {violation:e}")]
    ChoiViolation { property: &'static str, violation: f64 },

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("no peak found in merit function on [0, {t_max}]")]
    NoPeak { t_max: f64 },

    #[error("validation failed: {0}")]
    Validation(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

/// Coarse grouping used to pick process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Config,
    Engine,
    Validation,
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::InvalidSpec(_)
            | Error::Config(_)
            | Error::WrongModel { .. }
            | Error::OddSingletChain(_)
            | Error::DimensionCap { .. }
            | Error::Json(_) => ErrorClass::Config,
            Error::Validation(_) | Error::ChoiViolation { .. } => ErrorClass::Validation,
            _ => ErrorClass::Engine,
        }
    }
}
