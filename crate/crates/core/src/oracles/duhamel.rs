//! Fixed-point residual of the transformed problem:
//!
//! v(x,t) = ½[f(x+ct) + f(x−ct)] + (1/2c)∫ h + (1/2c)∫₀ᵗ ∫_{|y−x| ≤ c(t−s)} (k²/4) v(y,s) dy ds
//!
//! with f, h the v-problem data. The left side and the values of v inside
//! the double integral both come from the convolution solver.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::SampledField;
use crate::kernel::MediumParams;
use crate::quadrature::{round_panels, simpson_weights};
use crate::solver::{propagate_v, solve_v};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DuhamelConfig {
    /// Simpson slabs in time (even).
    pub slabs: usize,
    /// Simpson panels across the widest spatial window 2ct; narrower windows
    /// use proportionally fewer (at least two).
    pub panels: usize,
}

impl Default for DuhamelConfig {
    fn default() -> Self {
        DuhamelConfig {
            slabs: 32,
            panels: 256,
        }
    }
}

fn window_integral(field: &SampledField, x: f64, half_width: f64, max_panels: usize, full_width: f64) -> f64 {
    if half_width <= 0.0 {
        return 0.0;
    }
    let wanted = (max_panels as f64 * (2.0 * half_width) / full_width).ceil() as usize;
    let panels = round_panels(wanted, 2);
    let h = 2.0 * half_width / panels as f64;
    let w = simpson_weights(panels, h);
    let a = x - half_width;
    w.iter()
        .enumerate()
        .map(|(j, wj)| wj * field.sample(a + j as f64 * h))
        .sum()
}

/// Max-abs difference between solve_v(·, t) and the right side of the
/// Duhamel identity, over grid points whose dependency window [x−ct, x+ct]
/// lies inside the grid.
pub fn duhamel_residual(
    f: &SampledField,
    g: &SampledField,
    t: f64,
    params: &MediumParams,
    cfg: &DuhamelConfig,
) -> Result<f64> {
    f.require_same_grid(g)?;
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::Domain(format!("residual needs t > 0, got {t}")));
    }
    if cfg.slabs < 2 || cfg.slabs % 2 != 0 || cfg.panels < 2 {
        return Err(Error::Usage(format!(
            "need an even slab count >= 2 and panels >= 2, got {} / {}",
            cfg.slabs, cfg.panels
        )));
    }
    let grid = *f.grid();
    let c = params.c();
    let reach = c * t;
    let targets: Vec<usize> = (0..grid.len())
        .filter(|&i| {
            let x = grid.point(i);
            grid.contains(x - reach) && grid.contains(x + reach)
        })
        .collect();
    if targets.is_empty() {
        return Err(Error::Usage(format!(
            "light cone of width {} does not fit in the grid [{}, {}]",
            2.0 * reach,
            grid.x0(),
            grid.x_end()
        )));
    }

    let h = g.combine(1.0, f, 0.5 * params.k())?;
    let lhs = solve_v(f, g, t, params)?.field;
    let ds = t / cfg.slabs as f64;
    let slab_fields: Vec<SampledField> = (0..=cfg.slabs)
        .map(|j| propagate_v(f, &h, j as f64 * ds, params).map(|e| e.field))
        .collect::<Result<_>>()?;
    let time_weights = simpson_weights(cfg.slabs, ds);
    let source = params.k() * params.k() / 4.0 / (2.0 * c);
    let full = 2.0 * reach;

    let residual = targets
        .par_iter()
        .map(|&i| {
            let x = grid.point(i);
            let transport = 0.5 * (f.sample(x + reach) + f.sample(x - reach));
            let kick = window_integral(&h, x, reach, cfg.panels, full) / (2.0 * c);
            let mut duhamel = 0.0;
            if source != 0.0 {
                for (j, field) in slab_fields.iter().enumerate() {
                    let half = c * (t - j as f64 * ds);
                    duhamel += time_weights[j] * window_integral(field, x, half, cfg.panels, full);
                }
            }
            (lhs.values()[i] - (transport + kick + source * duhamel)).abs()
        })
        .reduce(|| 0.0, f64::max);
    Ok(residual)
}
