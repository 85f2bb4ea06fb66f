use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("argument outside supported domain: {0}")]
    Domain(String),

    #[error("quadrature did not converge: {0}")]
    NonConvergence(String),

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("confluent spectrum: minimum gap {gap:e} is below threshold {threshold:e}")]
    ConfluentSpectrum { gap: f64, threshold: f64 },

    #[error("degenerate calibration fit for {rep}: |value| = {magnitude:e}, error = {error:e}")]
    DegenerateFit {
        rep: String,
        magnitude: f64,
        error: f64,
    },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Short machine-readable kind, used in diagnostic JSON.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain(_) => "domain_error",
            Error::NonConvergence(_) => "non_convergence",
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::ConfluentSpectrum { .. } => "confluent_spectrum",
            Error::DegenerateFit { .. } => "degenerate_fit",
            Error::InvalidGrid(_) => "invalid_grid",
            Error::Config(_) => "invalid_config",
            Error::Parse(_) => "parse_error",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
