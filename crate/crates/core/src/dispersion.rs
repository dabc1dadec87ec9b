//! Sellmeier dispersion: refractive index, wavenumber and group delay, and the
//! two time scales of the counter-propagating interaction.

use serde::{Deserialize, Serialize};

use crate::error::{MopoError, Result};
use crate::phase_matching::TuningConfiguration;
use crate::units::{angular_to_wavelength, SPEED_OF_LIGHT};

const METERS_PER_MICRON: f64 = 1e-6;

/// Layout of the coefficient list of a [`SellmeierMaterial`].
///
/// Wavelengths inside the formulas are in micrometers, `L² = λ²`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SellmeierFormula {
    /// `n² = A + Σ B_i L² / (L² − C_i)`, coefficients `[A, B1, C1, B2, C2, …]`.
    Sellmeier,
    /// `n² = A − F L² + Σ B_i / (L² − C_i)`, coefficients `[A, F, B1, C1, …]`.
    PoleIr,
    /// Dispersionless `n` for reference calculations, coefficients `[n]`.
    Constant,
}

impl SellmeierFormula {
    fn check_len(self, len: usize) -> std::result::Result<(), String> {
        let ok = match self {
            SellmeierFormula::Sellmeier => len >= 1 && len % 2 == 1,
            SellmeierFormula::PoleIr => len >= 2 && len.is_multiple_of(2),
            SellmeierFormula::Constant => len == 1,
        };
        if ok {
            Ok(())
        } else {
            Err(format!("{len} coefficients do not fit the {self:?} layout"))
        }
    }

    /// Returns `(n², d(n²)/dL)` at `L` micrometers.
    fn evaluate(self, coefficients: &[f64], l_um: f64) -> (f64, f64) {
        let l2 = l_um * l_um;
        match self {
            SellmeierFormula::Sellmeier => {
                let mut n2 = coefficients[0];
                let mut dn2 = 0.0;
                for pair in coefficients[1..].chunks_exact(2) {
                    let (b, c) = (pair[0], pair[1]);
                    let den = l2 - c;
                    n2 += b * l2 / den;
                    dn2 -= 2.0 * b * c * l_um / (den * den);
                }
                (n2, dn2)
            }
            SellmeierFormula::PoleIr => {
                let (a, f) = (coefficients[0], coefficients[1]);
                let mut n2 = a - f * l2;
                let mut dn2 = -2.0 * f * l_um;
                for pair in coefficients[2..].chunks_exact(2) {
                    let (b, c) = (pair[0], pair[1]);
                    let den = l2 - c;
                    n2 += b / den;
                    dn2 -= 2.0 * b * l_um / (den * den);
                }
                (n2, dn2)
            }
            SellmeierFormula::Constant => (coefficients[0] * coefficients[0], 0.0),
        }
    }

    fn poles(self, coefficients: &[f64]) -> Vec<f64> {
        let tail = match self {
            SellmeierFormula::Sellmeier => &coefficients[1..],
            SellmeierFormula::PoleIr => &coefficients[2..],
            SellmeierFormula::Constant => return Vec::new(),
        };
        tail.chunks_exact(2).map(|p| p[1]).collect()
    }
}

/// Refractive-index model of one crystal axis, valid over a closed
/// vacuum-wavelength interval.
#[derive(Debug, Clone, PartialEq)]
pub struct SellmeierMaterial {
    name: String,
    axis: String,
    formula: SellmeierFormula,
    coefficients: Vec<f64>,
    lambda_min: f64,
    lambda_max: f64,
    provenance: String,
}

impl SellmeierMaterial {
    /// Builds and validates a material. `lambda_min`/`lambda_max` are in meters.
    ///
    /// Rejects layouts that do not match `formula`, non-finite coefficients,
    /// poles inside the validity interval, and any index `n ≤ 1` inside it.
    pub fn new(
        name: impl Into<String>,
        axis: impl Into<String>,
        formula: SellmeierFormula,
        coefficients: Vec<f64>,
        lambda_min: f64,
        lambda_max: f64,
        provenance: impl Into<String>,
    ) -> Result<Self> {
        let name = name.into();
        let invalid = |reason: String| MopoError::InvalidMaterial {
            material: name.clone(),
            reason,
        };
        formula.check_len(coefficients.len()).map_err(invalid)?;
        if coefficients.iter().any(|c| !c.is_finite()) {
            return Err(invalid("non-finite coefficient".into()));
        }
        if !(lambda_min > 0.0 && lambda_max > lambda_min && lambda_max.is_finite()) {
            return Err(invalid(format!(
                "bad validity range [{lambda_min:e}, {lambda_max:e}] m"
            )));
        }
        let (lo_um, hi_um) = (
            lambda_min / METERS_PER_MICRON,
            lambda_max / METERS_PER_MICRON,
        );
        for c in formula.poles(&coefficients) {
            if c >= lo_um * lo_um && c <= hi_um * hi_um {
                return Err(invalid(format!(
                    "pole at {:.6} um lies inside the validity range",
                    c.sqrt()
                )));
            }
        }
        const SAMPLES: usize = 1000;
        for i in 0..=SAMPLES {
            let l = lo_um + (hi_um - lo_um) * i as f64 / SAMPLES as f64;
            let (n2, _) = formula.evaluate(&coefficients, l);
            if n2 <= 1.0 || n2.is_nan() {
                return Err(invalid(format!("n^2 = {n2} <= 1 at {l} um")));
            }
        }
        Ok(Self {
            name,
            axis: axis.into(),
            formula,
            coefficients,
            lambda_min,
            lambda_max,
            provenance: provenance.into(),
        })
    }

    /// Dispersionless reference material with constant index `n` over a wide range.
    pub fn constant(name: impl Into<String>, n: f64) -> Result<Self> {
        Self::new(
            name,
            "isotropic",
            SellmeierFormula::Constant,
            vec![n],
            1e-7,
            1e-4,
            "reference",
        )
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn axis(&self) -> &str {
        &self.axis
    }

    pub fn formula(&self) -> SellmeierFormula {
        self.formula
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    /// Validity interval `(λ_min, λ_max)` in meters.
    pub fn wavelength_validity(&self) -> (f64, f64) {
        (self.lambda_min, self.lambda_max)
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    pub fn contains(&self, lambda: f64) -> bool {
        lambda >= self.lambda_min && lambda <= self.lambda_max
    }

    fn check_range(&self, lambda: f64) -> Result<f64> {
        if self.contains(lambda) {
            Ok(lambda / METERS_PER_MICRON)
        } else {
            Err(MopoError::OutOfRange {
                material: self.name.clone(),
                wavelength_m: lambda,
                min_m: self.lambda_min,
                max_m: self.lambda_max,
            })
        }
    }

    /// `(n, dn/dL)` with `L` in micrometers.
    fn index_and_slope(&self, lambda: f64) -> Result<(f64, f64)> {
        let l_um = self.check_range(lambda)?;
        let (n2, dn2) = self.formula.evaluate(&self.coefficients, l_um);
        let n = n2.sqrt();
        Ok((n, dn2 / (2.0 * n)))
    }

    /// Refractive index at vacuum wavelength `lambda` (m).
    pub fn refractive_index(&self, lambda: f64) -> Result<f64> {
        self.index_and_slope(lambda).map(|(n, _)| n)
    }

    /// Wavenumber `k = ω n(ω) / c` in rad/m at angular frequency `omega`.
    pub fn wavenumber(&self, omega: f64) -> Result<f64> {
        let n = self.refractive_index(angular_to_wavelength(omega))?;
        Ok(omega * n / SPEED_OF_LIGHT)
    }

    /// Inverse group velocity `k' = dk/dω` in s/m, from the differentiated
    /// Sellmeier formula: `k' = (n − λ dn/dλ) / c`.
    pub fn inverse_group_velocity(&self, omega: f64) -> Result<f64> {
        let lambda = angular_to_wavelength(omega);
        let (n, slope) = self.index_and_slope(lambda)?;
        let l_um = lambda / METERS_PER_MICRON;
        Ok((n - l_um * slope) / SPEED_OF_LIGHT)
    }

    /// Group index `c·k'` at vacuum wavelength `lambda`.
    pub fn group_index(&self, lambda: f64) -> Result<f64> {
        let (n, slope) = self.index_and_slope(lambda)?;
        Ok(n - lambda / METERS_PER_MICRON * slope)
    }
}

/// `Ω_gvm`, which has no finite value when the group delays coincide.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GvmBandwidth {
    Finite(f64),
    Unbounded,
}

impl GvmBandwidth {
    pub fn is_unbounded(&self) -> bool {
        matches!(self, GvmBandwidth::Unbounded)
    }

    /// Magnitude, `None` when unbounded.
    pub fn abs(&self) -> Option<f64> {
        match self {
            GvmBandwidth::Finite(w) => Some(w.abs()),
            GvmBandwidth::Unbounded => None,
        }
    }

    /// `f64` view for tables and plots; `Unbounded` maps to `+∞`.
    pub fn to_f64(&self) -> f64 {
        match self {
            GvmBandwidth::Finite(w) => *w,
            GvmBandwidth::Unbounded => f64::INFINITY,
        }
    }
}

/// Relative size of `|τ_gvm| / τ_gvs` below which the GVM time scale is zero.
pub const GVM_DEGENERACY_RATIO: f64 = 1e-12;

/// Group delays of the twin beams and the two spectral scales they set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedScales {
    /// Inverse group velocity of the signal, s/m.
    pub kprime_s: f64,
    /// Inverse group velocity of the idler, s/m.
    pub kprime_i: f64,
    /// `τ_gvs = (l_c/2)(k'_s + k'_i)`, s.
    pub tau_gvs: f64,
    /// `τ_gvm = (l_c/2)(k'_s − k'_i)`, s (signed).
    pub tau_gvm: f64,
    /// `Ω_gvs = 1/τ_gvs`, rad/s.
    pub omega_gvs: f64,
    /// `Ω_gvm = 1/τ_gvm`, rad/s.
    pub omega_gvm: GvmBandwidth,
}

impl DerivedScales {
    pub fn from_group_delays(kprime_s: f64, kprime_i: f64, crystal_length: f64) -> Result<Self> {
        let half = 0.5 * crystal_length;
        let tau_gvs = half * (kprime_s + kprime_i);
        if !(tau_gvs > 0.0 && tau_gvs.is_finite()) {
            return Err(MopoError::InvalidParameter(format!(
                "non-positive transit time tau_gvs = {tau_gvs:e} s"
            )));
        }
        let mut tau_gvm = half * (kprime_s - kprime_i);
        if tau_gvm.abs() <= GVM_DEGENERACY_RATIO * tau_gvs {
            tau_gvm = 0.0;
        }
        let omega_gvm = if tau_gvm == 0.0 {
            GvmBandwidth::Unbounded
        } else {
            GvmBandwidth::Finite(1.0 / tau_gvm)
        };
        Ok(Self {
            kprime_s,
            kprime_i,
            tau_gvs,
            tau_gvm,
            omega_gvs: 1.0 / tau_gvs,
            omega_gvm,
        })
    }

    /// Linearised half mismatch `D(Ω) l_c / 2 ≃ Ω/Ω_gvs`.
    #[inline]
    pub fn half_mismatch_linear(&self, omega: f64) -> f64 {
        omega * self.tau_gvs
    }

    /// Linearised propagation phase `β(Ω) ≃ Ω/Ω_gvm`; zero at degeneracy.
    #[inline]
    pub fn beta_linear(&self, omega: f64) -> f64 {
        omega * self.tau_gvm
    }

    /// Detuning in units of `Ω_gvs`.
    #[inline]
    pub fn normalized(&self, omega: f64) -> f64 {
        omega * self.tau_gvs
    }

    /// Detuning in rad/s from a value in units of `Ω_gvs`.
    #[inline]
    pub fn denormalized(&self, omega_tilde: f64) -> f64 {
        omega_tilde * self.omega_gvs
    }
}

/// Group delays and time scales for a tuning configuration.
pub fn derived_scales(tuning: &TuningConfiguration) -> Result<DerivedScales> {
    let material = tuning.material();
    let kprime_s = material.inverse_group_velocity(tuning.omega_s())?;
    let kprime_i = material.inverse_group_velocity(tuning.omega_i())?;
    DerivedScales::from_group_delays(kprime_s, kprime_i, tuning.crystal_length())
}
