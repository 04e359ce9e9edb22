//! Modified Bessel functions of the first kind, orders 0 and 1.
//!
//! Arguments up to [`SERIES_SWITCH`] use the ascending power series; larger
//! arguments use the Hankel asymptotic expansion truncated at its smallest
//! term. Both regimes report a bound on their truncation error.

use crate::error::{Error, Result};

/// Argument at which evaluation switches from the power series to the
/// asymptotic expansion.
pub const SERIES_SWITCH: f64 = 15.0;

/// Below this argument `i1_over_z` uses its explicit even series.
pub const SMALL_ARG: f64 = 1e-3;

const MAX_TERMS: usize = 200;
const SERIES_RTOL: f64 = 1e-16;

/// A Bessel value together with a bound on its truncation error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesselEval {
    pub value: f64,
    pub abs_error_bound: f64,
}

fn check_arg(z: f64) -> Result<()> {
    if !z.is_finite() || z < 0.0 {
        return Err(Error::Domain(format!(
            "Bessel argument must be finite and non-negative, got {z}"
        )));
    }
    Ok(())
}

/// Σ_m q^m / (m! (m+order)!) with q = z²/4, for order 0 or 1.
fn ascending_series(z: f64, order: u32) -> BesselEval {
    let q = 0.25 * z * z;
    let shift = order as f64;
    let mut term = 1.0;
    let mut sum = term;
    let mut m = 1usize;
    while m < MAX_TERMS {
        let mf = m as f64;
        term *= q / (mf * (mf + shift));
        sum += term;
        if term < SERIES_RTOL * sum {
            break;
        }
        m += 1;
    }
    // Once the ratio drops below one the tail is dominated by a geometric
    // series started at the next term.
    let next_ratio = q / ((m + 1) as f64 * ((m + 1) as f64 + shift));
    let tail = if next_ratio < 1.0 {
        term * next_ratio / (1.0 - next_ratio)
    } else {
        term
    };
    let scale = if order == 1 { 0.5 * z } else { 1.0 };
    let value = scale * sum;
    BesselEval {
        value,
        abs_error_bound: scale * tail + 4.0 * f64::EPSILON * value.abs(),
    }
}

/// Hankel expansion e^z / √(2πz) Σ_k a_k(ν) / z^k, truncated at the
/// smallest term.
fn asymptotic(z: f64, order: u32) -> BesselEval {
    let mu = 4.0 * (order * order) as f64;
    let mut term = 1.0f64;
    let mut sum = 1.0f64;
    let mut last = 1.0f64;
    for k in 1..MAX_TERMS {
        let odd = (2 * k - 1) as f64;
        let next = term * (odd * odd - mu) / (8.0 * k as f64 * z);
        if next.abs() >= term.abs() && k > 1 {
            last = next;
            break;
        }
        term = next;
        sum += term;
        last = term;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    let prefactor = z.exp() / (2.0 * std::f64::consts::PI * z).sqrt();
    let value = prefactor * sum;
    // Truncation error plus the exponentially small e^{-z} branch.
    let bound = prefactor * last.abs() + value.abs() * (-2.0 * z).exp() + 8.0 * f64::EPSILON * value.abs();
    BesselEval {
        value,
        abs_error_bound: bound,
    }
}

pub(crate) fn i0_eval(z: f64) -> BesselEval {
    if z <= SERIES_SWITCH {
        ascending_series(z, 0)
    } else {
        asymptotic(z, 0)
    }
}

pub(crate) fn i1_eval(z: f64) -> BesselEval {
    if z <= SERIES_SWITCH {
        ascending_series(z, 1)
    } else {
        asymptotic(z, 1)
    }
}

/// I₁(z)/z without the division at small arguments.
pub(crate) fn i1_over_z_unchecked(z: f64) -> f64 {
    if z < SMALL_ARG {
        // 1/2 + z²/16 + z⁴/384 + z⁶/18432
        let q = z * z;
        0.5 + q * (1.0 / 16.0 + q * (1.0 / 384.0 + q / 18432.0))
    } else if z <= SERIES_SWITCH {
        // ½ Σ (z²/4)^m / (m! (m+1)!), free of the z/2 prefactor
        0.5 * ascending_series(z, 1).value / (0.5 * z)
    } else {
        asymptotic(z, 1).value / z
    }
}

/// Checked evaluation of I₀ with its error bound.
pub fn bessel_i0_eval(z: f64) -> Result<BesselEval> {
    check_arg(z)?;
    Ok(i0_eval(z))
}

/// Checked evaluation of I₁ with its error bound.
pub fn bessel_i1_eval(z: f64) -> Result<BesselEval> {
    check_arg(z)?;
    Ok(i1_eval(z))
}

/// Modified Bessel function I₀(z) for z ≥ 0.
pub fn bessel_i0(z: f64) -> Result<f64> {
    bessel_i0_eval(z).map(|e| e.value)
}

/// Modified Bessel function I₁(z) for z ≥ 0.
pub fn bessel_i1(z: f64) -> Result<f64> {
    bessel_i1_eval(z).map(|e| e.value)
}

/// I₁(z)/z, continuously extended by 1/2 at z = 0.
pub fn i1_over_z(z: f64) -> Result<f64> {
    check_arg(z)?;
    Ok(i1_over_z_unchecked(z))
}
