//! Solutions of u_tt + k u_t = c² u_xx and of the transformed problem
//! v_tt = c² v_xx + (k²/4) v, with v = e^{kt/2} u.
//!
//! Function data are propagated with the explicit convolution formula
//!
//! v(x,t) = ½[f(x+ct) + f(x−ct)] + ∫ ψ_t,reg(x−y, t) f(y) dy + ∫ ψ(x−y, t) h(y) dy,
//!
//! where h = g + (k/2) f is the initial velocity of v. Both integrals run over
//! the window |x − y| ≤ c|t| and use composite Simpson on nodes placed
//! relative to x, so the kernel weights are shared by every output point.
//! Distributional data (δ, δ′ in the financial combination) are handled in
//! closed form and returned as [`MixedMeasure`]s.

use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{ensure_finite, Error, Result};
use crate::grid::{SampledField, SpaceGrid};
use crate::kernel::{psi, psi_of_lambda, psi_t_decompose, psi_t_regular, psi_t_regular_of_lambda, MediumParams};
use crate::measure::{Atom, MixedMeasure};
use crate::quadrature::{round_panels, simpson, simpson_weights};
use crate::bessel::{i0_eval, i1_over_z_unchecked};

/// Minimum number of Simpson panels across a dependency window.
pub const MIN_PANELS: usize = 64;
/// Panels per grid cell across a dependency window.
pub const PANELS_PER_CELL: usize = 4;

/// A computed field with an estimate of its numerical error (max-abs).
#[derive(Debug, Clone)]
pub struct FieldEstimate {
    pub field: SampledField,
    pub error_estimate: f64,
}

/// Simpson nodes on the window y − x ∈ [−c|t|, c|t|] with kernel-weighted
/// coefficients for the f and h integrals. A second set of weights uses every
/// other node (half the panels) and drives the error estimate.
struct ConeQuadrature {
    offsets: Vec<f64>,
    wf: Vec<f64>,
    wh: Vec<f64>,
    wf_coarse: Vec<f64>,
    wh_coarse: Vec<f64>,
    reach: f64,
}

impl ConeQuadrature {
    fn new(t: f64, params: &MediumParams, dx: f64) -> Self {
        let reach = params.c() * t.abs();
        if reach == 0.0 {
            return ConeQuadrature {
                offsets: vec![],
                wf: vec![],
                wh: vec![],
                wf_coarse: vec![],
                wh_coarse: vec![],
                reach,
            };
        }
        let window = 2.0 * reach;
        let per_cell = (PANELS_PER_CELL as f64 * window / dx).ceil() as usize;
        let panels = round_panels(per_cell.max(MIN_PANELS), 4);
        let h = window / panels as f64;
        let fine = simpson_weights(panels, h);
        let coarse = simpson_weights(panels / 2, 2.0 * h);
        let mut offsets = Vec::with_capacity(panels + 1);
        let mut wf = Vec::with_capacity(panels + 1);
        let mut wh = Vec::with_capacity(panels + 1);
        let mut wf_coarse = Vec::with_capacity(panels + 1);
        let mut wh_coarse = Vec::with_capacity(panels + 1);
        for j in 0..=panels {
            // distances to both window ends, each computed from its own side
            let left = j as f64 * h;
            let right = (panels - j) as f64 * h;
            let s = if j <= panels / 2 { -reach + left } else { reach - right };
            let lambda = left * right;
            let kf = psi_t_regular_of_lambda(lambda, t, params);
            let kh = psi_of_lambda(lambda, t, params);
            offsets.push(s);
            wf.push(fine[j] * kf);
            wh.push(fine[j] * kh);
            let cw = if j % 2 == 0 { coarse[j / 2] } else { 0.0 };
            wf_coarse.push(cw * kf);
            wh_coarse.push(cw * kh);
        }
        ConeQuadrature {
            offsets,
            wf,
            wh,
            wf_coarse,
            wh_coarse,
            reach,
        }
    }

    /// v at x together with |fine − coarse|/15.
    #[inline]
    fn eval(&self, x: f64, f: &SampledField, h: &SampledField) -> (f64, f64) {
        let transport = 0.5 * (f.sample(x + self.reach) + f.sample(x - self.reach));
        if self.offsets.is_empty() {
            return (transport, 0.0);
        }
        let grid = f.grid();
        let mut fine = 0.0;
        let mut coarse = 0.0;
        for (j, &s) in self.offsets.iter().enumerate() {
            if let Some((i, w)) = grid.stencil(x + s) {
                let fv = f.apply_stencil(i, &w);
                let hv = h.apply_stencil(i, &w);
                fine += self.wf[j] * fv + self.wh[j] * hv;
                coarse += self.wf_coarse[j] * fv + self.wh_coarse[j] * hv;
            }
        }
        (transport + fine, (fine - coarse).abs() / 15.0)
    }
}

fn check_pair(f: &SampledField, g: &SampledField, t: f64) -> Result<()> {
    ensure_finite("t", t)?;
    f.require_same_grid(g)
}

/// Propagates v-problem data (v(0) = f, v_t(0) = h) to time t of either sign.
pub fn propagate_v(f: &SampledField, h: &SampledField, t: f64, params: &MediumParams) -> Result<FieldEstimate> {
    check_pair(f, h, t)?;
    Ok(propagate_unchecked(f, h, t, params, 1.0))
}

fn propagate_unchecked(f: &SampledField, h: &SampledField, t: f64, params: &MediumParams, scale: f64) -> FieldEstimate {
    let grid = *f.grid();
    let quad = ConeQuadrature::new(t, params, grid.dx());
    let (values, errors): (Vec<f64>, Vec<f64>) = (0..grid.len())
        .into_par_iter()
        .map(|i| {
            let (v, e) = quad.eval(grid.point(i), f, h);
            (scale * v, scale.abs() * e)
        })
        .unzip();
    let error_estimate = errors.into_iter().fold(0.0, f64::max);
    FieldEstimate {
        field: SampledField::from_values_unchecked(grid, values),
        error_estimate,
    }
}

fn v_velocity_data(f: &SampledField, g: &SampledField, params: &MediumParams) -> Result<SampledField> {
    g.combine(1.0, f, 0.5 * params.k())
}

/// v(·, t) for u-problem data (u(0) = f, u_t(0) = g); v_t(0) = g + (k/2) f.
pub fn solve_v(f: &SampledField, g: &SampledField, t: f64, params: &MediumParams) -> Result<FieldEstimate> {
    check_pair(f, g, t)?;
    let h = v_velocity_data(f, g, params)?;
    Ok(propagate_unchecked(f, &h, t, params, 1.0))
}

/// u(·, t) for data u(0) = f, u_t(0) = g, with off-grid data taken as zero.
pub fn solve_u(f: &SampledField, g: &SampledField, t: f64, params: &MediumParams) -> Result<FieldEstimate> {
    check_pair(f, g, t)?;
    let h = v_velocity_data(f, g, params)?;
    Ok(propagate_unchecked(f, &h, t, params, params.damping_factor(t)))
}

/// Richardson-extrapolated central difference in time of `eval`.
fn richardson<F>(t: f64, probe: f64, eval: F) -> Result<FieldEstimate>
where
    F: Fn(f64) -> Result<FieldEstimate>,
{
    if !(probe > 0.0) || !probe.is_finite() {
        return Err(Error::Usage(format!("velocity probe must be > 0, got {probe}")));
    }
    let central = |h: f64| -> Result<(SampledField, f64)> {
        let plus = eval(t + h)?;
        let minus = eval(t - h)?;
        let d = plus.field.combine(0.5 / h, &minus.field, -0.5 / h)?;
        Ok((d, (plus.error_estimate + minus.error_estimate) / (2.0 * h)))
    };
    let (wide, wide_err) = central(probe)?;
    let (narrow, narrow_err) = central(0.5 * probe)?;
    let field = narrow.combine(4.0 / 3.0, &wide, -1.0 / 3.0)?;
    let truncation = field.max_abs_diff(&narrow)?;
    Ok(FieldEstimate {
        field,
        error_estimate: truncation + (4.0 * narrow_err + wide_err) / 3.0,
    })
}

/// u_t(·, t) by Richardson extrapolation of central differences of
/// [`solve_u`] at steps `dt_probe` and `dt_probe/2`.
pub fn velocity_u(
    f: &SampledField,
    g: &SampledField,
    t: f64,
    params: &MediumParams,
    dt_probe: f64,
) -> Result<FieldEstimate> {
    check_pair(f, g, t)?;
    richardson(t, dt_probe, |s| solve_u(f, g, s, params))
}

/// v_t(·, t) for v-problem data, same scheme as [`velocity_u`].
pub fn velocity_v(
    f: &SampledField,
    h: &SampledField,
    t: f64,
    params: &MediumParams,
    dt_probe: f64,
) -> Result<FieldEstimate> {
    check_pair(f, h, t)?;
    richardson(t, dt_probe, |s| propagate_v(f, h, s, params))
}

/// Distributional initial data with closed-form solutions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, serde::Serialize)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum DeltaKind {
    /// u(0) = δ, u_t(0) = 0
    DeltaPosition,
    /// u(0) = 0, u_t(0) = δ
    DeltaVelocity,
    /// u(0) = δ, u_t(0) = −c δ′
    Financial,
}

/// Closed-form solution for δ-type data as a mixed measure on `grid`.
pub fn solve_delta_family(kind: DeltaKind, t: f64, params: &MediumParams, grid: &SpaceGrid) -> Result<MixedMeasure> {
    if !t.is_finite() || t <= 0.0 {
        return Err(Error::Domain(format!("delta solutions need t > 0, got {t}")));
    }
    let p = *params;
    let ct = p.c() * t;
    if grid.x0() > -ct || grid.x_end() < ct {
        return Err(Error::Usage(format!(
            "grid [{}, {}] does not cover the light cone [{}, {}]",
            grid.x0(),
            grid.x_end(),
            -ct,
            ct
        )));
    }
    let damp = p.damping_factor(t);
    let half_k = 0.5 * p.k();
    let (atoms, profile): (Vec<Atom>, Arc<dyn Fn(f64) -> f64 + Send + Sync>) = match kind {
        DeltaKind::DeltaPosition => (
            vec![Atom::new(-ct, 0.5 * damp), Atom::new(ct, 0.5 * damp)],
            Arc::new(move |x| {
                let lambda = (ct - x) * (ct + x);
                damp * (psi_t_regular_of_lambda(lambda, t, &p) + half_k * psi_of_lambda(lambda, t, &p))
            }),
        ),
        DeltaKind::DeltaVelocity => (
            vec![],
            Arc::new(move |x| damp * psi_of_lambda((ct - x) * (ct + x), t, &p)),
        ),
        DeltaKind::Financial => {
            let a = p.alpha();
            let k_over_4c = p.k() / (4.0 * p.c());
            (
                vec![Atom::new(ct, damp)],
                Arc::new(move |x| {
                    let lambda0 = ((ct - x) * (ct + x)).max(0.0);
                    let xi = 2.0 * a * lambda0.sqrt();
                    // α(x+ct) I₁(ξ)/√λ₀ = 2α²(x+ct) · I₁(ξ)/ξ
                    damp * (2.0 * a * a * (x + ct) * i1_over_z_unchecked(xi) + k_over_4c * i0_eval(xi).value)
                }),
            )
        }
    };
    Ok(MixedMeasure::with_profile(atoms, (-ct, ct), profile)?
        .probabilistic()
        .tabulate_on(grid))
}

/// Which kernel a measure is convolved with.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelChoice {
    Psi,
    PsiT,
}

/// Panels used for density-by-kernel convolutions.
pub const CONVOLUTION_PANELS: usize = 2048;

/// Convolves a mixed measure with ψ(·, t) or ψ_t(·, t).
///
/// Atoms translate the kernel; the density part is integrated against the
/// kernel by Simpson over the intersection of its support with the window.
/// When the input carries samples, the result is tabulated on the same grid.
pub fn convolve_measure(m: &MixedMeasure, kernel_time: f64, params: &MediumParams, which: KernelChoice) -> Result<MixedMeasure> {
    ensure_finite("kernel_time", kernel_time)?;
    let t = kernel_time;
    let p = *params;
    let reach = p.c() * t.abs();
    for a in &m.atoms {
        if !a.position.is_finite() || !a.weight.is_finite() {
            return Err(Error::Usage(format!("atom ({}, {}) is not finite", a.position, a.weight)));
        }
    }
    if let Some((a, b)) = m.support {
        if !a.is_finite() || !b.is_finite() {
            return Err(Error::Usage("density support must be bounded".into()));
        }
    }
    let Some((lo, hi)) = m.hull() else {
        return Ok(MixedMeasure::atoms_only(vec![]));
    };

    let mut out_atoms = Vec::new();
    if which == KernelChoice::PsiT {
        let (ka, _) = psi_t_decompose(t, &p)?;
        for a in &m.atoms {
            for (pos, w) in ka.positions.iter().zip(ka.weights) {
                out_atoms.push(Atom::new(a.position + pos, a.weight * w));
            }
        }
    }

    let source = m.clone();
    let atoms = m.atoms.clone();
    let profile = move |x: f64| -> f64 {
        let kernel = |z: f64| match which {
            KernelChoice::Psi => psi(z, t, &p).unwrap_or(0.0),
            KernelChoice::PsiT => psi_t_regular(z, t, &p).unwrap_or(0.0),
        };
        let mut v: f64 = atoms.iter().map(|a| a.weight * kernel(x - a.position)).sum();
        if let Some((a, b)) = source.support {
            let (from, to) = ((x - reach).max(a), (x + reach).min(b));
            if to > from {
                v += simpson(|y| source.density_at(y) * kernel(x - y), from, to, CONVOLUTION_PANELS);
            }
            if which == KernelChoice::PsiT {
                v += 0.5 * (source.density_at(x - reach) + source.density_at(x + reach));
            }
        }
        v
    };
    let support = (lo - reach, hi + reach);
    let mut result = MixedMeasure::with_profile(out_atoms, support, Arc::new(profile))?;
    if let Some(d) = &m.density {
        result = result.tabulate_on(d.grid());
    }
    Ok(result)
}
