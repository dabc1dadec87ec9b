//! Physical constants and unit conversions.

use std::f64::consts::TAU;

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Vacuum wavelength (m) to angular frequency (rad/s).
#[inline]
pub fn wavelength_to_angular(lambda: f64) -> f64 {
    TAU * SPEED_OF_LIGHT / lambda
}

/// Angular frequency (rad/s) to vacuum wavelength (m).
#[inline]
pub fn angular_to_wavelength(omega: f64) -> f64 {
    TAU * SPEED_OF_LIGHT / omega
}

/// Wraps a phase into `(-π, π]`.
pub fn wrap_phase(phase: f64) -> f64 {
    let wrapped = phase.rem_euclid(TAU);
    if wrapped > std::f64::consts::PI {
        wrapped - TAU
    } else {
        wrapped
    }
}
