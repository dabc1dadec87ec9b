//! Symmetric frequency grids.

use crate::error::{MopoError, Result};

/// Uniform grid on `[−span, span]` with an odd number of points, so that the
/// origin is always a grid point and `x(−k) = −x(k)` exactly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrequencyGrid {
    span: f64,
    points: usize,
}

impl FrequencyGrid {
    pub fn symmetric(span: f64, points: usize) -> Result<Self> {
        if !(span > 0.0 && span.is_finite()) {
            return Err(MopoError::Config(format!(
                "grid span must be positive, got {span}"
            )));
        }
        if points < 3 || points.is_multiple_of(2) {
            return Err(MopoError::Config(format!(
                "grid point count must be odd and >= 3, got {points}"
            )));
        }
        Ok(Self { span, points })
    }

    pub fn span(&self) -> f64 {
        self.span
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn step(&self) -> f64 {
        self.span / self.half() as f64
    }

    fn half(&self) -> usize {
        (self.points - 1) / 2
    }

    /// Index of the origin.
    pub fn center(&self) -> usize {
        self.half()
    }

    pub fn value(&self, index: usize) -> f64 {
        let half = self.half() as i64;
        let k = index as i64 - half;
        self.span * k as f64 / half as f64
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.points).map(|i| self.value(i)).collect()
    }

    pub fn describe(&self) -> String {
        format!("symmetric span={} points={}", self.span, self.points)
    }
}
