//! Fundamental solution ψ of v_tt = c²v_xx + (k²/4)v with data (0, δ), and
//! the atom/density split of its time derivative.

use serde::Serialize;

use crate::bessel::{i0_eval, i1_over_z_unchecked};
use crate::error::{ensure_finite, Error, Result};

/// Relative tolerance used to classify points on the characteristics.
pub const CONE_EPS: f64 = 1e-12;

/// Damping rate and wave speed of the medium.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MediumParams {
    k: f64,
    c: f64,
    alpha: f64,
}

impl MediumParams {
    pub fn new(k: f64, c: f64) -> Result<Self> {
        if !k.is_finite() || k < 0.0 {
            return Err(Error::Domain(format!(
                "damping k must be finite and >= 0, got {k}"
            )));
        }
        if !c.is_finite() || c <= 0.0 {
            return Err(Error::Domain(format!(
                "wave speed c must be finite and > 0, got {c}"
            )));
        }
        Ok(MediumParams {
            k,
            c,
            alpha: k / (4.0 * c),
        })
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    /// k / (4c)
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// e^{-kt/2}, the factor relating the damped and transformed problems.
    pub fn damping_factor(&self, t: f64) -> f64 {
        (-0.5 * self.k * t).exp()
    }
}

/// Position of (x, t) relative to the light cone |x| = c|t|.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConeCoordinates {
    /// c²t² − x²
    pub lambda: f64,
    pub on_boundary: bool,
    pub inside: bool,
}

impl ConeCoordinates {
    pub fn new(x: f64, t: f64, params: &MediumParams) -> Self {
        let ct = params.c * t;
        let lambda = (ct - x) * (ct + x);
        let scale = ct * ct + x * x;
        ConeCoordinates {
            lambda,
            on_boundary: lambda.abs() <= CONE_EPS * scale,
            inside: lambda > 0.0,
        }
    }
}

/// The two Dirac atoms of ψ_t(·, t), before any damping prefactor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelAtoms {
    pub positions: [f64; 2],
    pub weights: [f64; 2],
}

/// Evaluator for the absolutely continuous part of ψ_t(·, t).
#[derive(Debug, Clone, Copy)]
pub struct RegularPart {
    t: f64,
    params: MediumParams,
}

impl RegularPart {
    pub fn time(&self) -> f64 {
        self.t
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        psi_t_regular(x, self.t, &self.params)
    }
}

fn sign(t: f64) -> f64 {
    if t > 0.0 {
        1.0
    } else if t < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// ψ as a function of λ = c²t² − x² ≥ 0 (interior or boundary).
pub(crate) fn psi_of_lambda(lambda: f64, t: f64, params: &MediumParams) -> f64 {
    let xi = 2.0 * params.alpha * lambda.max(0.0).sqrt();
    sign(t) / (2.0 * params.c) * i0_eval(xi).value
}

/// α c |t| I₁(2α√λ)/√λ written through I₁(z)/z, which stays bounded at λ = 0.
pub(crate) fn psi_t_regular_of_lambda(lambda: f64, t: f64, params: &MediumParams) -> f64 {
    let a = params.alpha;
    let xi = 2.0 * a * lambda.max(0.0).sqrt();
    a * params.c * t.abs() * 2.0 * a * i1_over_z_unchecked(xi)
}

fn check_point(x: f64, t: f64) -> Result<()> {
    ensure_finite("x", x)?;
    ensure_finite("t", t)
}

/// ψ(x, t) = sgn(t)/(2c) · I₀(2α√(c²t² − x²)) on the closed cone |x| ≤ c|t|.
pub fn psi(x: f64, t: f64, params: &MediumParams) -> Result<f64> {
    check_point(x, t)?;
    let cone = ConeCoordinates::new(x, t, params);
    Ok(if cone.on_boundary {
        sign(t) / (2.0 * params.c)
    } else if cone.inside {
        psi_of_lambda(cone.lambda, t, params)
    } else {
        0.0
    })
}

/// Regular part of ψ_t: α c |t| I₀′(2α√λ)/√λ inside the cone, α²c|t| on it,
/// zero outside.
pub fn psi_t_regular(x: f64, t: f64, params: &MediumParams) -> Result<f64> {
    check_point(x, t)?;
    let cone = ConeCoordinates::new(x, t, params);
    Ok(if cone.on_boundary {
        psi_t_regular_of_lambda(0.0, t, params)
    } else if cone.inside {
        psi_t_regular_of_lambda(cone.lambda, t, params)
    } else {
        0.0
    })
}

/// Splits ψ_t(·, t) into atoms ½δ(· + ct) + ½δ(· − ct) and a regular part.
pub fn psi_t_decompose(t: f64, params: &MediumParams) -> Result<(KernelAtoms, RegularPart)> {
    ensure_finite("t", t)?;
    let ct = params.c * t;
    Ok((
        KernelAtoms {
            positions: [-ct, ct],
            weights: [0.5, 0.5],
        },
        RegularPart { t, params: *params },
    ))
}
