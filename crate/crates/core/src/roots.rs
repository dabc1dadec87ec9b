//! Bracketed bisection.

use crate::error::{MopoError, Result};

/// Hard cap on bisection steps.
pub const MAX_BISECTION_ITERATIONS: usize = 200;

/// Finds a sign change of `f` inside `[lo, hi]` by bisection.
///
/// Halving continues until the bracket can no longer be split in `f64`
/// (or `f` hits an exact zero), then the best endpoint is returned together
/// with its residual. `f(lo)` and `f(hi)` must have opposite signs.
pub fn bisect<F>(mut lo: f64, mut hi: f64, f: F) -> Result<(f64, f64)>
where
    F: Fn(f64) -> Result<f64>,
{
    if !(lo.is_finite() && hi.is_finite()) {
        return Err(MopoError::InvalidParameter(format!(
            "bisection bracket [{lo}, {hi}] is not finite"
        )));
    }
    if lo > hi {
        std::mem::swap(&mut lo, &mut hi);
    }
    let mut f_lo = f(lo)?;
    let f_hi = f(hi)?;
    if f_lo == 0.0 {
        return Ok((lo, 0.0));
    }
    if f_hi == 0.0 {
        return Ok((hi, 0.0));
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(MopoError::NoRoot { lo, hi });
    }

    let mut best = if f_lo.abs() < f_hi.abs() {
        (lo, f_lo)
    } else {
        (hi, f_hi)
    };
    for _ in 0..MAX_BISECTION_ITERATIONS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            return Ok(best);
        }
        let f_mid = f(mid)?;
        if f_mid.abs() < best.1.abs() {
            best = (mid, f_mid);
        }
        if f_mid == 0.0 {
            return Ok(best);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Err(MopoError::NoConvergence {
        iterations: MAX_BISECTION_ITERATIONS,
        residual: best.1,
    })
}
