use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("wavelength {wavelength_um} um is outside the {material} validity range [{lo_um}, {hi_um}] um")]
    OutOfRange {
        material: String,
        wavelength_um: f64,
        lo_um: f64,
        hi_um: f64,
    },
    #[error("not phase-matchable: {0}")]
    NotPhaseMatchable(String),
    #[error("no root found: {0}")]
    NoRoot(String),
    #[error("degenerate configuration: {0}")]
    Degenerate(String),
    #[error("approximation regime violated: {what} (required {required:.6e}, got {actual:.6e})")]
    Regime {
        what: String,
        required: f64,
        actual: f64,
    },
    #[error("amplitude is not normalized (squared norm {0})")]
    NotNormalized(f64),
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    #[error("spectral truncation mass {mass:.3e} exceeds {limit:.1e}; raise n_modes")]
    Truncation { mass: f64, limit: f64 },
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Short machine-readable tag used in CLI error reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::OutOfRange { .. } => "out_of_range",
            Error::NotPhaseMatchable(_) => "not_phase_matchable",
            Error::NoRoot(_) => "no_root",
            Error::Degenerate(_) => "degenerate",
            Error::Regime { .. } => "regime",
            Error::NotNormalized(_) => "not_normalized",
            Error::GridMismatch(_) => "grid_mismatch",
            Error::Truncation { .. } => "truncation",
            Error::Invalid(_) => "invalid",
            Error::Parse(_) => "parse",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
        }
    }

    /// True for failures of the numerical model rather than of the inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NotPhaseMatchable(_)
                | Error::NoRoot(_)
                | Error::Degenerate(_)
                | Error::Regime { .. }
                | Error::NotNormalized(_)
                | Error::Truncation { .. }
        )
    }
}
