//! Squeezing and antisqueezing (EPR correlation) spectra of the twin beams.
//!
//! For the quadrature phase sum `ψ = φ_s + φ_i` and detection delay `Δt`,
//!
//! ```text
//! Σ(Ω) = ½ { |U_s(Ω)  − V_i*(−Ω) e^{+iΩΔt} e^{iψ}|²
//!          + |U_s(−Ω) − V_i*(Ω)  e^{−iΩΔt} e^{iψ}|² }
//! ```
//!
//! The difference combination `X_− = (X_s − X_i)/√2` and the sum combination
//! `Y_+ = (Y_s + Y_i)/√2` give this same expression for the same `ψ`: moving
//! from `X` to `Y` adds `π/2` to each quadrature angle (`π` to `ψ`), and
//! flipping the sign of the idler term removes that `π` again. The
//! orthogonal (antisqueezed) quadrature is reached with `ψ + π`, see
//! [`Branch`]. Shot noise is 1.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::bogoliubov::{check_below_threshold, coefficients, gamma, sinc, Model};
use crate::dispersion::DerivedScales;
use crate::error::{MopoError, Result};
use crate::grid::FrequencyGrid;
use crate::phase_matching::TuningConfiguration;
use crate::table::DataTable;
use crate::units::wrap_phase;
use crate::THRESHOLD_GAIN;

/// Squeezed quadrature or the orthogonal one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    Squeeze,
    /// `ψ + π`.
    Antisqueeze,
}

impl Branch {
    pub fn toggled(self) -> Self {
        match self {
            Branch::Squeeze => Branch::Antisqueeze,
            Branch::Antisqueeze => Branch::Squeeze,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Branch::Squeeze => "squeeze",
            Branch::Antisqueeze => "antisqueeze",
        }
    }

    fn phase_offset(self) -> f64 {
        match self {
            Branch::Squeeze => 0.0,
            Branch::Antisqueeze => PI,
        }
    }
}

impl std::str::FromStr for Branch {
    type Err = MopoError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "squeeze" => Ok(Branch::Squeeze),
            "antisqueeze" => Ok(Branch::Antisqueeze),
            other => Err(MopoError::Config(format!(
                "unknown branch '{other}' (expected squeeze or antisqueeze)"
            ))),
        }
    }
}

/// Homodyne setting: phase sum `φ_s + φ_i` (rad), delay `Δt` (s), branch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSetting {
    pub phi_sum: f64,
    pub delta_t: f64,
    pub branch: Branch,
}

impl QuadratureSetting {
    pub fn new(phi_sum: f64, delta_t: f64, branch: Branch) -> Self {
        Self {
            phi_sum,
            delta_t,
            branch,
        }
    }

    /// `φ_s + φ_i = k_s l_c + φ_p`, `Δt = 0`, squeezed branch.
    pub fn fixed(tuning: &TuningConfiguration) -> Self {
        Self::new(tuning.fixed_phase_sum(), 0.0, Branch::Squeeze)
    }

    pub fn orthogonal(self) -> Self {
        Self {
            branch: self.branch.toggled(),
            ..self
        }
    }

    /// Phase entering the spectrum formula.
    pub fn effective_phase(&self) -> f64 {
        self.phi_sum + self.branch.phase_offset()
    }
}

/// Rule for choosing `φ_s + φ_i`, possibly per frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PhasePrescription {
    /// `2θ(0) = k_s l_c + φ_p` at every frequency.
    Fixed,
    /// `arg[U_s(Ω) V_i(−Ω)]` from the coefficients of the chosen model.
    Optimal,
    /// `k_s l_c + φ_p + arg sinc γ(Ω)` with linearised `γ`, β dropped.
    OptimalLinear,
    /// As [`PhasePrescription::OptimalLinear`] plus `Ω/Ω_gvm`.
    OptimalLinearGvm,
    /// A given constant, rad.
    Explicit(f64),
}

impl PhasePrescription {
    pub fn phase_sum(
        &self,
        tuning: &TuningConfiguration,
        scales: &DerivedScales,
        omega: f64,
        model: Model,
    ) -> Result<f64> {
        match *self {
            PhasePrescription::Fixed => Ok(tuning.fixed_phase_sum()),
            PhasePrescription::Optimal => optimal_phase(tuning, scales, omega, model),
            PhasePrescription::OptimalLinear => {
                Ok(optimal_phase_linear(tuning, scales, omega, false))
            }
            PhasePrescription::OptimalLinearGvm => {
                Ok(optimal_phase_linear(tuning, scales, omega, true))
            }
            PhasePrescription::Explicit(p) => Ok(p),
        }
    }

    pub fn label(&self) -> String {
        match self {
            PhasePrescription::Fixed => "fixed".into(),
            PhasePrescription::Optimal => "optimal".into(),
            PhasePrescription::OptimalLinear => "optimal-linear".into(),
            PhasePrescription::OptimalLinearGvm => "optimal-linear-gvm".into(),
            PhasePrescription::Explicit(p) => format!("{p:e}"),
        }
    }
}

/// The two bracketed terms of the spectrum, probing `ω_j + Ω` and `ω_j − Ω`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumTerms {
    pub plus: f64,
    pub minus: f64,
}

impl SpectrumTerms {
    pub fn sigma(&self) -> f64 {
        0.5 * (self.plus + self.minus)
    }

    /// `|T₊ − T₋| / (T₊ + T₋)`; zero when the delay compensates the GVM offset.
    pub fn balance(&self) -> f64 {
        let sum = self.plus + self.minus;
        if sum == 0.0 {
            0.0
        } else {
            (self.plus - self.minus).abs() / sum
        }
    }
}

pub fn spectrum_terms(
    tuning: &TuningConfiguration,
    scales: &DerivedScales,
    setting: &QuadratureSetting,
    omega: f64,
    model: Model,
) -> Result<SpectrumTerms> {
    let at_plus = coefficients(tuning, scales, omega, model)?;
    let at_minus = coefficients(tuning, scales, -omega, model)?;
    let rot = Complex64::cis(setting.effective_phase());
    let delay = omega * setting.delta_t;
    let plus = (at_plus.u_s - at_plus.v_i.conj() * Complex64::cis(delay) * rot).norm_sqr();
    let minus = (at_minus.u_s - at_minus.v_i.conj() * Complex64::cis(-delay) * rot).norm_sqr();
    Ok(SpectrumTerms { plus, minus })
}

/// Noise spectrum `Σ(Ω)` of the joint quadrature selected by `setting`.
pub fn spectrum_general(
    tuning: &TuningConfiguration,
    scales: &DerivedScales,
    setting: &QuadratureSetting,
    omega: f64,
    model: Model,
) -> Result<f64> {
    spectrum_terms(tuning, scales, setting, omega, model).map(|t| t.sigma())
}

/// `2θ(Ω) = arg[U_s(Ω) V_i(−Ω)]`, in `(−π, π]`: the phase sum minimising the
/// `+Ω` term of the spectrum.
pub fn optimal_phase(
    tuning: &TuningConfiguration,
    scales: &DerivedScales,
    omega: f64,
    model: Model,
) -> Result<f64> {
    let c = coefficients(tuning, scales, omega, model)?;
    Ok(wrap_phase((c.u_s * c.v_i).arg()))
}

/// Closed form of the optimal phase under the linear expansion:
/// `k_s l_c + φ_p + arg sinc γ(Ω)`, plus `Ω/Ω_gvm` when `include_gvm`.
pub fn optimal_phase_linear(
    tuning: &TuningConfiguration,
    scales: &DerivedScales,
    omega: f64,
    include_gvm: bool,
) -> f64 {
    let gam = gamma(tuning.gain(), scales.half_mismatch_linear(omega));
    let mut phase = tuning.signal_phase() + tuning.pump_phase();
    if sinc(gam) < 0.0 {
        phase += PI;
    }
    if include_gvm {
        phase += scales.beta_linear(omega);
    }
    wrap_phase(phase)
}

/// Lower bound of the spectrum over all phases and delays: each bracketed term
/// at its own optimum, `½[(|U_s(Ω)| − |V_i(−Ω)|)² + (|U_s(−Ω)| − |V_i(Ω)|)²]`.
///
/// When `|U_s|` is even in `Ω` this is `(|U_s(Ω)| − |V_i(−Ω)|)²`, reached by
/// [`optimal_phase`].
pub fn spectrum_optimized(
    tuning: &TuningConfiguration,
    scales: &DerivedScales,
    omega: f64,
    model: Model,
) -> Result<f64> {
    let a = coefficients(tuning, scales, omega, model)?;
    let b = coefficients(tuning, scales, -omega, model)?;
    let t1 = (a.u_s.norm() - a.v_i.norm()).powi(2);
    let t2 = (b.u_s.norm() - b.v_i.norm()).powi(2);
    Ok(0.5 * (t1 + t2))
}

/// Universal spectrum for linear dispersion, fixed phase and `Δt = 0`:
/// `(γ − g sin γ)/(γ + g sin γ)` with `γ = √(g² + Ω̃²)`, or its reciprocal
/// on the antisqueezed branch.
///
/// Valid for `0 ≤ g < π/2`; the value is not checked.
pub fn spectrum_universal(gain: f64, omega_tilde: f64, branch: Branch) -> f64 {
    let gs = gain * sinc(gamma(gain, omega_tilde));
    match branch {
        Branch::Squeeze => (1.0 - gs) / (1.0 + gs),
        Branch::Antisqueeze => (1.0 + gs) / (1.0 - gs),
    }
}

/// Why a near-threshold formula is being used outside its comfort zone.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RegimeWarning {
    FarFromThreshold { epsilon: f64 },
    LargeDetuning { omega_tilde: f64, gain: f64 },
}

impl std::fmt::Display for RegimeWarning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RegimeWarning::FarFromThreshold { epsilon } => {
                write!(f, "near-threshold law used at epsilon = {epsilon} > 0.3")
            }
            RegimeWarning::LargeDetuning { omega_tilde, gain } => write!(
                f,
                "near-threshold law used at |omega_tilde| = {} > g/2 = {}",
                omega_tilde.abs(),
                gain / 2.0
            ),
        }
    }
}

/// Flags `ε > 0.3` or `|Ω̃| > g/2`, with `g = π/2 − ε`.
pub fn near_threshold_regime(epsilon: f64, omega_tilde: f64) -> Option<RegimeWarning> {
    let gain = THRESHOLD_GAIN - epsilon;
    if epsilon > 0.3 {
        Some(RegimeWarning::FarFromThreshold { epsilon })
    } else if omega_tilde.abs() > 0.5 * gain {
        Some(RegimeWarning::LargeDetuning { omega_tilde, gain })
    } else {
        None
    }
}

fn warn_regime(epsilon: f64, omega_tilde: f64) {
    if let Some(w) = near_threshold_regime(epsilon, omega_tilde) {
        log::warn!("{w}");
    }
}

/// Parabolic law `¼(ε² + Ω̃²/g_thr²)` near threshold and at small detuning.
pub fn near_threshold_squeeze(epsilon: f64, omega_tilde: f64) -> f64 {
    warn_regime(epsilon, omega_tilde);
    near_threshold_parabola(epsilon, omega_tilde)
}

/// Lorentzian `4 / (ε² + Ω̃²/g_thr²)`: height `4/ε²`, half width `ε g_thr`.
pub fn near_threshold_antisqueeze(epsilon: f64, omega_tilde: f64) -> f64 {
    warn_regime(epsilon, omega_tilde);
    1.0 / near_threshold_parabola(epsilon, omega_tilde)
}

/// [`near_threshold_squeeze`] without the regime check, for callers that
/// sample far outside it on purpose.
pub fn near_threshold_parabola(epsilon: f64, omega_tilde: f64) -> f64 {
    let x = omega_tilde / THRESHOLD_GAIN;
    0.25 * (epsilon * epsilon + x * x)
}

/// Full width at half maximum of the near-threshold antisqueezing peak, rad/s.
pub fn antisqueeze_fwhm(epsilon: f64, scales: &DerivedScales) -> f64 {
    2.0 * epsilon * THRESHOLD_GAIN * scales.omega_gvs
}

/// Shot-noise crossing of the fixed-phase spectrum, `Ω_gvs √(π² − g²)`, rad/s.
pub fn squeezing_bandwidth(gain: f64, scales: &DerivedScales) -> Result<f64> {
    if !(0.0..PI).contains(&gain) {
        return Err(MopoError::InvalidParameter(format!(
            "squeezing bandwidth needs 0 <= g < pi, got {gain}"
        )));
    }
    Ok(scales.omega_gvs * (PI * PI - gain * gain).sqrt())
}

/// Degenerate cavity OPO below threshold:
/// `((1 − A_p)² + Ω̄²) / ((1 + A_p)² + Ω̄²)`, threshold at `A_p = 1`,
/// `Ω̄` in units of the cavity linewidth.
pub fn opo_spectrum(pump: f64, omega_bar: f64) -> f64 {
    let w2 = omega_bar * omega_bar;
    ((1.0 - pump).powi(2) + w2) / ((1.0 + pump).powi(2) + w2)
}

/// A sampled spectrum on a grid of `Ω/Ω_gvs`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumSeries {
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    pub metadata: Vec<(String, String)>,
}

impl SpectrumSeries {
    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    pub fn to_table(&self) -> DataTable {
        let mut t = DataTable::new(vec!["omega_tilde".into(), "sigma".into()]);
        t.metadata = self.metadata.clone();
        t.rows = self
            .grid
            .iter()
            .zip(&self.values)
            .map(|(&x, &y)| vec![x, y])
            .collect();
        t
    }

    pub fn from_table(table: &DataTable) -> Result<Self> {
        let grid = table
            .column("omega_tilde")
            .ok_or_else(|| MopoError::Table("missing omega_tilde column".into()))?;
        let values = table
            .column("sigma")
            .ok_or_else(|| MopoError::Table("missing sigma column".into()))?;
        Ok(Self {
            grid,
            values,
            metadata: table.metadata.clone(),
        })
    }
}

/// Standard header entries describing a tuning.
pub fn tuning_metadata(tuning: &TuningConfiguration) -> Vec<(String, String)> {
    vec![
        ("material".into(), tuning.material().name().to_string()),
        ("lambda_p".into(), format!("{:e}", tuning.lambda_p())),
        ("lambda_s".into(), format!("{:e}", tuning.lambda_s())),
        ("Lambda".into(), format!("{:e}", tuning.poling_period())),
        ("l_c".into(), format!("{:e}", tuning.crystal_length())),
    ]
}

/// What to compute at each grid point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumRequest {
    pub phase: PhasePrescription,
    pub delta_t: f64,
    pub branch: Branch,
    pub model: Model,
}

/// Evaluates the terms of the spectrum at every point of `grid` (units of
/// `Ω_gvs`). Points are independent and evaluated in parallel.
pub fn spectrum_terms_on_grid(
    tuning: &TuningConfiguration,
    scales: &DerivedScales,
    request: &SpectrumRequest,
    grid: &[f64],
) -> Result<Vec<SpectrumTerms>> {
    check_below_threshold(tuning.gain())?;
    grid.par_iter()
        .map(|&x| {
            let omega = scales.denormalized(x);
            let phi_sum = request
                .phase
                .phase_sum(tuning, scales, omega, request.model)?;
            let setting = QuadratureSetting::new(phi_sum, request.delta_t, request.branch);
            spectrum_terms(tuning, scales, &setting, omega, request.model)
        })
        .collect()
}

/// A [`SpectrumSeries`] of the general spectrum with full metadata.
pub fn spectrum_series(
    tuning: &TuningConfiguration,
    scales: &DerivedScales,
    request: &SpectrumRequest,
    grid: &FrequencyGrid,
) -> Result<SpectrumSeries> {
    let xs = grid.values();
    let terms = spectrum_terms_on_grid(tuning, scales, request, &xs)?;
    let mut metadata = tuning_metadata(tuning);
    metadata.extend([
        ("g".to_string(), tuning.gain().to_string()),
        ("model".to_string(), request.model.to_string()),
        ("phi_sum".to_string(), request.phase.label()),
        ("branch".to_string(), request.branch.as_str().to_string()),
        ("delta_t".to_string(), format!("{:e}", request.delta_t)),
        ("grid".to_string(), grid.describe()),
    ]);
    Ok(SpectrumSeries {
        grid: xs,
        values: terms.iter().map(SpectrumTerms::sigma).collect(),
        metadata,
    })
}
