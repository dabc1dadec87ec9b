//! Backward quasi-phase-matching.
//!
//! Pump and signal propagate along `+z`, the idler along `−z`. A poling grating
//! of period `Λ` and odd order `m` closes the momentum balance
//! `k_s − k_i = k_p − m·2π/Λ`.

use std::f64::consts::TAU;

use crate::dispersion::{DerivedScales, SellmeierMaterial};
use crate::error::{MopoError, Result};
use crate::roots::bisect;
use crate::units::{angular_to_wavelength, wavelength_to_angular, wrap_phase};

/// Relative tolerance on the QPM residual accepted from the solver, in units
/// of the grating wavevector `2π/Λ`.
pub const QPM_RESIDUAL_TOLERANCE: f64 = 1e-6;

/// How the signal wavelength of a tuning is chosen.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SignalWavelength {
    /// `λ_s = λ_i = 2λ_p`.
    Degenerate,
    /// Explicit vacuum wavelength in meters.
    Wavelength(f64),
}

fn check_order(qpm_order: u32) -> Result<()> {
    if qpm_order % 2 == 1 {
        Ok(())
    } else {
        Err(MopoError::InvalidParameter(format!(
            "QPM order must be odd and positive, got {qpm_order}"
        )))
    }
}

fn idler_frequency(omega_p: f64, omega_s: f64) -> Result<f64> {
    let omega_i = omega_p - omega_s;
    if omega_i > 0.0 && omega_s > 0.0 {
        Ok(omega_i)
    } else {
        Err(MopoError::InvalidParameter(format!(
            "signal frequency {omega_s:e} rad/s must lie strictly between 0 and the pump frequency {omega_p:e} rad/s"
        )))
    }
}

fn poling_period_from_frequencies(
    material: &SellmeierMaterial,
    omega_p: f64,
    omega_s: f64,
    qpm_order: u32,
) -> Result<f64> {
    check_order(qpm_order)?;
    let omega_i = idler_frequency(omega_p, omega_s)?;
    let k_p = material.wavenumber(omega_p)?;
    let k_s = material.wavenumber(omega_s)?;
    let k_i = material.wavenumber(omega_i)?;
    let grating = k_p - k_s + k_i;
    if grating <= 0.0 || grating.is_nan() {
        return Err(MopoError::NotPhaseMatchable(format!(
            "required grating wavevector k_p - k_s + k_i = {grating:e} rad/m is not positive"
        )));
    }
    Ok(qpm_order as f64 * TAU / grating)
}

/// Poling period `Λ = m·2π / (k_p − k_s + k_i)` with `ω_i = ω_p − ω_s`.
pub fn poling_period(
    material: &SellmeierMaterial,
    lambda_p: f64,
    lambda_s: f64,
    qpm_order: u32,
) -> Result<f64> {
    poling_period_from_frequencies(
        material,
        wavelength_to_angular(lambda_p),
        wavelength_to_angular(lambda_s),
        qpm_order,
    )
}

/// QPM residual `k_s − k_i − k_p + m·2π/Λ` in rad/m.
pub fn qpm_residual(
    material: &SellmeierMaterial,
    lambda_p: f64,
    poling_period: f64,
    qpm_order: u32,
    lambda_s: f64,
) -> Result<f64> {
    let omega_p = wavelength_to_angular(lambda_p);
    let omega_s = wavelength_to_angular(lambda_s);
    let omega_i = idler_frequency(omega_p, omega_s)?;
    Ok(material.wavenumber(omega_s)?
        - material.wavenumber(omega_i)?
        - material.wavenumber(omega_p)?
        + qpm_order as f64 * TAU / poling_period)
}

/// Signal wavelength phase-matched by a given grating, bracketed bisection.
pub fn solve_signal_wavelength(
    material: &SellmeierMaterial,
    lambda_p: f64,
    poling_period: f64,
    qpm_order: u32,
    bracket: (f64, f64),
) -> Result<f64> {
    check_order(qpm_order)?;
    if poling_period <= 0.0 || poling_period.is_nan() {
        return Err(MopoError::InvalidParameter(format!(
            "poling period must be positive, got {poling_period:e}"
        )));
    }
    let (lambda_s, residual) = bisect(bracket.0, bracket.1, |l| {
        qpm_residual(material, lambda_p, poling_period, qpm_order, l)
    })?;
    let tol = QPM_RESIDUAL_TOLERANCE * TAU / poling_period;
    if residual.abs() < tol {
        Ok(lambda_s)
    } else {
        Err(MopoError::NoConvergence {
            iterations: crate::roots::MAX_BISECTION_ITERATIONS,
            residual,
        })
    }
}

/// A quasi-phase-matched crystal with its pump, gain and geometry.
///
/// Constructors compute the poling period (or the signal wavelength) so that
/// `D(0) = 0` up to rounding. Wavenumbers at the carriers are cached.
#[derive(Debug, Clone)]
pub struct TuningConfiguration {
    material: SellmeierMaterial,
    omega_p: f64,
    omega_s: f64,
    omega_i: f64,
    poling_period: f64,
    qpm_order: u32,
    crystal_length: f64,
    gain: f64,
    pump_phase: f64,
    k_p: f64,
    k_s: f64,
    k_i: f64,
}

impl TuningConfiguration {
    /// Tuning for a chosen signal, with `Λ` from [`poling_period`]; gain and
    /// pump phase start at zero.
    pub fn phase_matched(
        material: &SellmeierMaterial,
        lambda_p: f64,
        signal: SignalWavelength,
        qpm_order: u32,
        crystal_length: f64,
    ) -> Result<Self> {
        let omega_p = wavelength_to_angular(lambda_p);
        let omega_s = match signal {
            SignalWavelength::Degenerate => 0.5 * omega_p,
            SignalWavelength::Wavelength(l) => wavelength_to_angular(l),
        };
        let period = poling_period_from_frequencies(material, omega_p, omega_s, qpm_order)?;
        Self::build(
            material,
            omega_p,
            omega_s,
            period,
            qpm_order,
            crystal_length,
        )
    }

    /// Tuning for a given grating; the signal is solved inside `bracket`.
    pub fn from_poling_period(
        material: &SellmeierMaterial,
        lambda_p: f64,
        poling_period: f64,
        qpm_order: u32,
        bracket: (f64, f64),
        crystal_length: f64,
    ) -> Result<Self> {
        let lambda_s =
            solve_signal_wavelength(material, lambda_p, poling_period, qpm_order, bracket)?;
        Self::build(
            material,
            wavelength_to_angular(lambda_p),
            wavelength_to_angular(lambda_s),
            poling_period,
            qpm_order,
            crystal_length,
        )
    }

    fn build(
        material: &SellmeierMaterial,
        omega_p: f64,
        omega_s: f64,
        poling_period: f64,
        qpm_order: u32,
        crystal_length: f64,
    ) -> Result<Self> {
        check_order(qpm_order)?;
        if !(crystal_length > 0.0 && crystal_length.is_finite()) {
            return Err(MopoError::InvalidParameter(format!(
                "crystal length must be positive, got {crystal_length:e}"
            )));
        }
        let omega_i = idler_frequency(omega_p, omega_s)?;
        Ok(Self {
            k_p: material.wavenumber(omega_p)?,
            k_s: material.wavenumber(omega_s)?,
            k_i: material.wavenumber(omega_i)?,
            material: material.clone(),
            omega_p,
            omega_s,
            omega_i,
            poling_period,
            qpm_order,
            crystal_length,
            gain: 0.0,
            pump_phase: 0.0,
        })
    }

    /// Sets the dimensionless gain `g = √(2π) χ |α_p| l_c`.
    pub fn with_gain(mut self, gain: f64) -> Result<Self> {
        if !(gain >= 0.0 && gain.is_finite()) {
            return Err(MopoError::InvalidParameter(format!(
                "gain must be finite and non-negative, got {gain}"
            )));
        }
        self.gain = gain;
        Ok(self)
    }

    pub fn with_pump_phase(mut self, pump_phase: f64) -> Self {
        self.pump_phase = pump_phase;
        self
    }

    pub fn material(&self) -> &SellmeierMaterial {
        &self.material
    }
    pub fn omega_p(&self) -> f64 {
        self.omega_p
    }
    pub fn omega_s(&self) -> f64 {
        self.omega_s
    }
    pub fn omega_i(&self) -> f64 {
        self.omega_i
    }
    pub fn lambda_p(&self) -> f64 {
        angular_to_wavelength(self.omega_p)
    }
    pub fn lambda_s(&self) -> f64 {
        angular_to_wavelength(self.omega_s)
    }
    pub fn lambda_i(&self) -> f64 {
        angular_to_wavelength(self.omega_i)
    }
    pub fn poling_period(&self) -> f64 {
        self.poling_period
    }
    pub fn qpm_order(&self) -> u32 {
        self.qpm_order
    }
    pub fn crystal_length(&self) -> f64 {
        self.crystal_length
    }
    pub fn gain(&self) -> f64 {
        self.gain
    }
    pub fn pump_phase(&self) -> f64 {
        self.pump_phase
    }
    pub fn is_degenerate(&self) -> bool {
        self.omega_s == self.omega_i
    }

    /// Grating wavevector `k_G = m·2π/Λ`.
    pub fn grating_wavevector(&self) -> f64 {
        self.qpm_order as f64 * TAU / self.poling_period
    }

    /// `k_s l_c` reduced to `[0, 2π)`.
    pub fn signal_phase(&self) -> f64 {
        (self.k_s * self.crystal_length).rem_euclid(TAU)
    }

    /// `k_i l_c` reduced to `[0, 2π)`.
    pub fn idler_phase(&self) -> f64 {
        (self.k_i * self.crystal_length).rem_euclid(TAU)
    }

    /// Quadrature phase sum `φ_s + φ_i = 2θ(0) = k_s l_c + φ_p`, in `(−π, π]`.
    pub fn fixed_phase_sum(&self) -> f64 {
        wrap_phase(self.signal_phase() + self.pump_phase)
    }

    /// Phase mismatch `D(Ω) = k_s(Ω) − k_i(−Ω) − k_p + k_G`, rad/m.
    pub fn mismatch_exact(&self, omega: f64) -> Result<f64> {
        let k_s = self.material.wavenumber(self.omega_s + omega)?;
        let k_i = self.material.wavenumber(self.omega_i - omega)?;
        Ok((k_s - self.k_s) - (k_i - self.k_i)
            + (self.k_s - self.k_i - self.k_p + self.grating_wavevector()))
    }

    /// Linearised mismatch `(k'_s + k'_i) Ω`, rad/m.
    pub fn mismatch_linear(&self, scales: &DerivedScales, omega: f64) -> f64 {
        2.0 * scales.half_mismatch_linear(omega) / self.crystal_length
    }

    /// Propagation phase `β(Ω) = [k_s(Ω) + k_i(−Ω) − (k_s + k_i)] l_c/2`, rad.
    pub fn beta_exact(&self, omega: f64) -> Result<f64> {
        let k_s = self.material.wavenumber(self.omega_s + omega)?;
        let k_i = self.material.wavenumber(self.omega_i - omega)?;
        Ok(((k_s - self.k_s) + (k_i - self.k_i)) * 0.5 * self.crystal_length)
    }
}
