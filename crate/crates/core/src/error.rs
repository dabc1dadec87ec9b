use thiserror::Error;

pub type Result<T, E = MopoError> = std::result::Result<T, E>;

/// Coarse classification used by the CLI to pick an exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Config,
    Domain,
    Numeric,
    Io,
}

#[derive(Debug, Error)]
pub enum MopoError {
    #[error(
        "wavelength {wavelength_m:.6e} m is outside the validity range \
         [{min_m:.6e}, {max_m:.6e}] m of material '{material}'"
    )]
    OutOfRange {
        material: String,
        wavelength_m: f64,
        min_m: f64,
        max_m: f64,
    },

    #[error("material '{material}': {reason}")]
    InvalidMaterial { material: String, reason: String },

    #[error("material '{0}' not found in the material database")]
    UnknownMaterial(String),

    #[error("geometry is not backward phase-matchable: {0}")]
    NotPhaseMatchable(String),

    #[error("gain g = {gain} is at or above the MOPO threshold π/2 (guard {guard:e})")]
    AboveThreshold { gain: f64, guard: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("no sign change of the residual in bracket [{lo:.9e}, {hi:.9e}]")]
    NoRoot { lo: f64, hi: f64 },

    #[error("root finder did not converge after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("malformed table: {0}")]
    Table(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl MopoError {
    pub fn kind(&self) -> ErrorKind {
        match self {
            MopoError::OutOfRange { .. }
            | MopoError::NotPhaseMatchable(_)
            | MopoError::AboveThreshold { .. }
            | MopoError::InvalidParameter(_) => ErrorKind::Domain,
            MopoError::NoRoot { .. } | MopoError::NoConvergence { .. } => ErrorKind::Numeric,
            MopoError::InvalidMaterial { .. }
            | MopoError::UnknownMaterial(_)
            | MopoError::Table(_)
            | MopoError::Config(_) => ErrorKind::Config,
            MopoError::Io(_) => ErrorKind::Io,
        }
    }
}
