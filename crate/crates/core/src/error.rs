use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the simulator and its measurement functionals.
#[derive(Debug, Error)]
pub enum Error {
    #[error("chain length must be even and between 4 and 30, got {0}")]
    InvalidSize(usize),

    #[error("site {site} is out of range for a chain of {n_sites} sites")]
    SiteOutOfRange { site: usize, n_sites: usize },

    #[error("configuration {bits:#b} violates the blockade constraint at site {site}")]
    ConstraintViolation { bits: u32, site: usize },

    #[error("configuration {0:#b} is not part of the basis")]
    NotInBasis(u32),

    #[error("invalid glider index: {0}")]
    InvalidGlider(String),

    #[error("invalid mode index: {0}")]
    InvalidMode(String),

    #[error("cycle phase index {p} out of range for a cycle of length {len}")]
    PhaseIndexOutOfRange { p: usize, len: usize },

    #[error("expected a {expected} density matrix, got dimension {actual}")]
    Dimension {
        expected: &'static str,
        actual: usize,
    },

    #[error("too many sites in reduced state: {requested} (limit {limit})")]
    TooManySites { requested: usize, limit: usize },

    #[error("sites must be distinct, site {0} repeated")]
    RepeatedSite(usize),

    #[error("density matrix is not physical: smallest eigenvalue {0:e}")]
    NonPhysical(f64),

    #[error("need at least 3 retained levels for spacing ratios, got {0}")]
    TooFewLevels(usize),

    #[error("Loschmidt echo is zero or outside (0, 1]: {0:e}")]
    EchoSaturated(f64),

    #[error("cannot parse named state `{0}`")]
    StateSpec(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for errors caused by user-provided parameters rather than the run itself.
    pub fn is_config_error(&self) -> bool {
        matches!(
            self,
            Error::InvalidSize(_)
                | Error::SiteOutOfRange { .. }
                | Error::ConstraintViolation { .. }
                | Error::InvalidGlider(_)
                | Error::InvalidMode(_)
                | Error::PhaseIndexOutOfRange { .. }
                | Error::TooManySites { .. }
                | Error::RepeatedSite(_)
                | Error::StateSpec(_)
                | Error::Config(_)
                | Error::Json(_)
        )
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
