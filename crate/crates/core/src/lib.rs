//! Numerical model of the mirrorless optical parametric oscillator (MOPO)
//! below threshold.
//!
//! The crate is organised bottom-up:
//!
//! * [`dispersion`] and [`materials`]: Sellmeier refractive indices, wavenumbers
//!   and group delays, plus the bundled material database.
//! * [`phase_matching`]: backward quasi-phase-matching, the phase mismatch
//!   `D(Ω)` and the propagation phase `β(Ω)`.
//! * [`bogoliubov`]: the input-output coefficients `U_s, V_s, U_i, V_i`.
//! * [`spectra`]: squeezing / antisqueezing (EPR correlation) spectra, the
//!   universal closed form, near-threshold laws and the cavity OPO reference.
//! * [`table`]: the tab-delimited data table format used by the CLI.
//!
//! All frequencies are angular (rad/s) and all wavelengths are vacuum
//! wavelengths in meters.

pub mod bogoliubov;
pub mod dispersion;
pub mod error;
pub mod grid;
pub mod materials;
pub mod phase_matching;
pub mod roots;
pub mod spectra;
pub mod table;
pub mod units;

pub use bogoliubov::{BogoliubovCoefficients, Model};
pub use dispersion::{DerivedScales, GvmBandwidth, SellmeierFormula, SellmeierMaterial};
pub use error::{ErrorKind, MopoError, Result};
pub use grid::FrequencyGrid;
pub use materials::MaterialDatabase;
pub use phase_matching::{SignalWavelength, TuningConfiguration};
pub use spectra::{Branch, PhasePrescription, QuadratureSetting, SpectrumSeries};

/// Parametric gain at the MOPO oscillation threshold, `g_thr = π/2`.
pub const THRESHOLD_GAIN: f64 = std::f64::consts::FRAC_PI_2;
