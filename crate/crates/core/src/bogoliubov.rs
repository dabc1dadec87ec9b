//! Input-output (Bogoliubov) coefficients of the below-threshold MOPO.
//!
//! ```text
//! A_s_out(Ω)  = U_s(Ω) A_s_in(Ω)   + V_s(Ω) A_i_in†(−Ω)
//! A_i_out(−Ω) = U_i(−Ω) A_i_in(−Ω) + V_i(−Ω) A_s_in†(Ω)
//!
//! U_s(Ω)  = e^{i k_s l_c} e^{iβ(Ω)} φ(Ω)
//! V_s(Ω)  = e^{i (k_s − k_i) l_c} g e^{iφ_p} sinc γ(Ω) φ(Ω)
//! U_i(−Ω) = e^{i k_i l_c} e^{iβ(Ω)} φ*(Ω)
//! V_i(−Ω) = g e^{iφ_p} sinc γ(Ω) φ*(Ω)
//! φ(Ω)    = 1 / (cos γ − i (δ/γ) sin γ),   γ = √(g² + δ²),   δ = D(Ω) l_c / 2
//! ```
//!
//! The mismatch in the denominator of `φ` is the same `D(Ω)` used in `γ`.
//! `U_i` carries the idler propagation phase while `V_i` carries none; both
//! are kept exactly as written, and the unitarity relations hold with them.

use num_complex::Complex64;

use crate::dispersion::DerivedScales;
use crate::error::{MopoError, Result};
use crate::phase_matching::TuningConfiguration;
use crate::THRESHOLD_GAIN;

/// Gains closer than this to `π/2` are rejected.
pub const THRESHOLD_GUARD: f64 = 1e-9;

/// Below this `|x|` `sinc` switches to its Taylor series.
const SINC_SERIES_CUTOFF: f64 = 1e-4;

/// Dispersion model used to evaluate `D(Ω)` and `β(Ω)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Model {
    /// Full Sellmeier wavenumbers.
    Exact,
    /// First-order expansion: `D l_c/2 = Ω/Ω_gvs`, `β = Ω/Ω_gvm`.
    Linearized,
}

impl Model {
    pub fn as_str(&self) -> &'static str {
        match self {
            Model::Exact => "exact",
            Model::Linearized => "linearized",
        }
    }
}

impl std::fmt::Display for Model {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Model {
    type Err = MopoError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Model::Exact),
            "linearized" | "linear" => Ok(Model::Linearized),
            other => Err(MopoError::Config(format!(
                "unknown model '{other}' (expected exact or linearized)"
            ))),
        }
    }
}

/// `sin x / x`, with `sinc(0) = 1`.
pub fn sinc(x: f64) -> f64 {
    if x.abs() < SINC_SERIES_CUTOFF {
        let x2 = x * x;
        1.0 - x2 / 6.0 * (1.0 - x2 / 20.0)
    } else {
        x.sin() / x
    }
}

/// `γ = √(g² + δ²)` where `δ = D(Ω) l_c / 2`.
pub fn gamma(gain: f64, half_mismatch: f64) -> f64 {
    gain.hypot(half_mismatch)
}

/// Rejects gains outside `[0, π/2 − THRESHOLD_GUARD)`.
pub fn check_below_threshold(gain: f64) -> Result<()> {
    if !(gain >= 0.0 && gain.is_finite()) {
        return Err(MopoError::InvalidParameter(format!(
            "gain must be finite and non-negative, got {gain}"
        )));
    }
    if gain >= THRESHOLD_GAIN - THRESHOLD_GUARD {
        return Err(MopoError::AboveThreshold {
            gain,
            guard: THRESHOLD_GUARD,
        });
    }
    Ok(())
}

/// Coefficients for one conjugate pair of modes `(ω_s + Ω, ω_i − Ω)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BogoliubovCoefficients {
    /// Detuning `Ω`, rad/s.
    pub detuning: f64,
    /// `U_s(Ω)`.
    pub u_s: Complex64,
    /// `V_s(Ω)`.
    pub v_s: Complex64,
    /// `U_i(−Ω)`.
    pub u_i: Complex64,
    /// `V_i(−Ω)`.
    pub v_i: Complex64,
}

/// Evaluates the coefficients given the half mismatch `δ` and the phase `β`.
///
/// `signal_phase` and `idler_phase` are `k_s l_c` and `k_i l_c` (any branch).
pub fn coefficients_from_mismatch(
    gain: f64,
    pump_phase: f64,
    signal_phase: f64,
    idler_phase: f64,
    half_mismatch: f64,
    beta: f64,
) -> Result<BogoliubovCoefficients> {
    check_below_threshold(gain)?;
    let gam = gamma(gain, half_mismatch);
    let sc = sinc(gam);
    let phi = Complex64::new(gam.cos(), -half_mismatch * sc).inv();
    let gain_term = Complex64::from_polar(gain * sc, pump_phase);
    Ok(BogoliubovCoefficients {
        detuning: 0.0,
        u_s: Complex64::cis(signal_phase + beta) * phi,
        v_s: Complex64::cis(signal_phase - idler_phase) * gain_term * phi,
        u_i: Complex64::cis(idler_phase + beta) * phi.conj(),
        v_i: gain_term * phi.conj(),
    })
}

/// Half mismatch `D(Ω) l_c / 2` and propagation phase `β(Ω)` under `model`.
pub fn mismatch_and_beta(
    tuning: &TuningConfiguration,
    scales: &DerivedScales,
    omega: f64,
    model: Model,
) -> Result<(f64, f64)> {
    match model {
        Model::Exact => {
            let half = 0.5 * tuning.crystal_length() * tuning.mismatch_exact(omega)?;
            Ok((half, tuning.beta_exact(omega)?))
        }
        Model::Linearized => Ok((
            scales.half_mismatch_linear(omega),
            scales.beta_linear(omega),
        )),
    }
}

/// Coefficients at detuning `omega` (rad/s) for the gain and pump phase stored
/// in `tuning`.
pub fn coefficients(
    tuning: &TuningConfiguration,
    scales: &DerivedScales,
    omega: f64,
    model: Model,
) -> Result<BogoliubovCoefficients> {
    check_below_threshold(tuning.gain())?;
    let (half, beta) = mismatch_and_beta(tuning, scales, omega, model)?;
    let mut c = coefficients_from_mismatch(
        tuning.gain(),
        tuning.pump_phase(),
        tuning.signal_phase(),
        tuning.idler_phase(),
        half,
        beta,
    )?;
    c.detuning = omega;
    Ok(c)
}

/// Deviations from the three Bogoliubov invariants.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct UnitarityResiduals {
    /// `max ||U|² − |V|² − 1|` over signal and idler.
    pub modulus: f64,
    /// `|U_s(Ω) V_i(−Ω) − U_i(−Ω) V_s(Ω)|`.
    pub cross: f64,
    /// `||V_s(Ω)| − |V_i(−Ω)||`.
    pub conjugate_gain: f64,
}

impl UnitarityResiduals {
    pub fn max(&self) -> f64 {
        self.modulus.max(self.cross).max(self.conjugate_gain)
    }
}

fn residuals_one(c: &BogoliubovCoefficients) -> UnitarityResiduals {
    UnitarityResiduals {
        modulus: (c.u_s.norm_sqr() - c.v_s.norm_sqr() - 1.0)
            .abs()
            .max((c.u_i.norm_sqr() - c.v_i.norm_sqr() - 1.0).abs()),
        cross: (c.u_s * c.v_i - c.u_i * c.v_s).norm(),
        conjugate_gain: (c.v_s.norm() - c.v_i.norm()).abs(),
    }
}

/// Unitarity residuals for the coefficient sets at `+Ω` and `−Ω`, each
/// invariant taking the worse of the two.
pub fn unitarity_residuals(
    at_plus: &BogoliubovCoefficients,
    at_minus: &BogoliubovCoefficients,
) -> UnitarityResiduals {
    let a = residuals_one(at_plus);
    let b = residuals_one(at_minus);
    UnitarityResiduals {
        modulus: a.modulus.max(b.modulus),
        cross: a.cross.max(b.cross),
        conjugate_gain: a.conjugate_gain.max(b.conjugate_gain),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dispersion::derived_scales;
    use crate::materials::{MaterialDatabase, PPLN};
    use crate::phase_matching::SignalWavelength;
    use std::f64::consts::FRAC_PI_2;

    fn tuning(g: f64) -> (TuningConfiguration, DerivedScales) {
        let m = MaterialDatabase::bundled().get(PPLN).unwrap();
        let t =
            TuningConfiguration::phase_matched(m, 0.8e-6, SignalWavelength::Degenerate, 1, 0.01)
                .unwrap()
                .with_gain(g)
                .unwrap()
                .with_pump_phase(0.3);
        let s = derived_scales(&t).unwrap();
        (t, s)
    }

    #[test]
    fn gamma_values() {
        assert_eq!(gamma(1.0, 0.0), 1.0);
        assert!((gamma(1.0, 1.0) - std::f64::consts::SQRT_2).abs() < 1e-15);
        assert_eq!(gamma(FRAC_PI_2, 0.0), FRAC_PI_2);
        assert!(gamma(0.7, -0.2) >= 0.7);
    }

    #[test]
    fn sinc_is_smooth_at_origin() {
        assert_eq!(sinc(0.0), 1.0);
        for x in [5e-5, 9.9e-5, 1e-4, 1.01e-4, 1e-3] {
            assert!((sinc(x) - x.sin() / x).abs() < 1e-15, "{x}");
        }
        assert!(sinc(std::f64::consts::PI).abs() < 1e-16);
    }

    #[test]
    fn hand_values_at_g_one() {
        let (t, s) = tuning(1.0);
        for model in [Model::Exact, Model::Linearized] {
            let c = coefficients(&t, &s, 0.0, model).unwrap();
            // 1/cos(1), tan(1)
            assert!((c.u_s.norm() - 1.850_815_717_680_925_6).abs() < 1e-12);
            assert!((c.v_s.norm() - 1.557_407_724_654_902_3).abs() < 1e-12);
            assert!((1.85082_f64.powi(2) - 1.55741_f64.powi(2) - 1.0).abs() < 1e-4);
        }
    }

    #[test]
    fn no_interaction() {
        let (t, s) = tuning(0.0);
        for w in [0.0, 1e10, -3e11] {
            let c = coefficients(&t, &s, w, Model::Exact).unwrap();
            assert!((c.u_s.norm() - 1.0).abs() < 1e-15);
            assert_eq!(c.v_s, Complex64::new(0.0, 0.0));
            assert_eq!(c.v_i, Complex64::new(0.0, 0.0));
            let r = unitarity_residuals(&c, &coefficients(&t, &s, -w, Model::Exact).unwrap());
            assert!(r.max() < 1e-15);
        }
    }

    #[test]
    fn diverges_monotonically_towards_threshold() {
        let mut last = (0.0, 0.0);
        for g in [1.0, 1.3, 1.5, 1.55, 1.57, FRAC_PI_2 - 1e-4] {
            let (t, s) = tuning(g);
            let c = coefficients(&t, &s, 0.0, Model::Linearized).unwrap();
            assert!(c.u_s.norm() > last.0 && c.v_s.norm() > last.1);
            last = (c.u_s.norm(), c.v_s.norm());
        }
        assert!(last.0 > 1e3);
    }

    #[test]
    fn threshold_guard() {
        let (t, s) = tuning(FRAC_PI_2);
        assert!(matches!(
            coefficients(&t, &s, 0.0, Model::Linearized),
            Err(MopoError::AboveThreshold { .. })
        ));
        assert!(check_below_threshold(FRAC_PI_2 - 2e-9).is_ok());
        assert!(check_below_threshold(FRAC_PI_2 - 0.5e-9).is_err());
        assert!(check_below_threshold(2.0).is_err());
        assert!(check_below_threshold(-0.1).is_err());
    }

    #[test]
    fn unitarity_exact_model_far_detuned() {
        let (t, s) = tuning(1.5);
        let w = 5.0 * s.omega_gvs;
        let plus = coefficients(&t, &s, w, Model::Exact).unwrap();
        let minus = coefficients(&t, &s, -w, Model::Exact).unwrap();
        assert!(unitarity_residuals(&plus, &minus).max() < 1e-10);
    }

    #[test]
    fn linearized_gain_is_even() {
        let (t, s) = tuning(1.2);
        for x in [0.1, 1.0, 3.7, 12.0] {
            let w = x * s.omega_gvs;
            let a = coefficients(&t, &s, w, Model::Linearized).unwrap();
            let b = coefficients(&t, &s, -w, Model::Linearized).unwrap();
            assert!((a.v_s.norm() - b.v_s.norm()).abs() <= 1e-14 * a.v_s.norm());
        }
    }

    #[test]
    fn exact_and_linearized_moduli_agree() {
        let (t, s) = tuning(1.4);
        for j in -50..=50 {
            let w = 5.0 * s.omega_gvs * j as f64 / 50.0;
            let e = coefficients(&t, &s, w, Model::Exact).unwrap();
            let l = coefficients(&t, &s, w, Model::Linearized).unwrap();
            assert!((e.u_s.norm() - l.u_s.norm()).abs() / l.u_s.norm() < 0.01);
            assert!((e.v_s.norm() - l.v_s.norm()).abs() / l.u_s.norm() < 0.01);
        }
    }

    #[test]
    fn model_parsing() {
        assert_eq!("exact".parse::<Model>().unwrap(), Model::Exact);
        assert_eq!("linearized".parse::<Model>().unwrap(), Model::Linearized);
        assert!("cubic".parse::<Model>().is_err());
    }
}
