//! Explicit leapfrog scheme for u_tt + k u_t = c² u_xx with zero Dirichlet
//! ends.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::SampledField;
use crate::kernel::MediumParams;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FDConfig {
    pub dt: f64,
    pub courant: f64,
    pub steps: usize,
}

impl FDConfig {
    /// Smallest step count reaching `t_final` with Courant number at most
    /// `max_courant`; dt is then shrunk so the steps land exactly on t_final.
    pub fn for_final_time(t_final: f64, dx: f64, params: &MediumParams, max_courant: f64) -> Result<Self> {
        if !(t_final > 0.0) || !(dx > 0.0) || !(max_courant > 0.0) {
            return Err(Error::Usage(format!(
                "FD config needs t_final, dx, courant > 0 (got {t_final}, {dx}, {max_courant})"
            )));
        }
        let c = params.c();
        let steps = (t_final * c / (max_courant * dx)).ceil().max(1.0) as usize;
        let dt = t_final / steps as f64;
        Ok(FDConfig {
            dt,
            courant: c * dt / dx,
            steps,
        })
    }
}

const PAR_CHUNK: usize = 4096;

fn laplacian_into(out: &mut [f64], u: &[f64]) {
    let n = u.len();
    out[0] = 0.0;
    out[n - 1] = 0.0;
    out[1..n - 1]
        .par_chunks_mut(PAR_CHUNK)
        .enumerate()
        .for_each(|(ci, chunk)| {
            let base = 1 + ci * PAR_CHUNK;
            for (j, o) in chunk.iter_mut().enumerate() {
                let i = base + j;
                *o = u[i + 1] - 2.0 * u[i] + u[i - 1];
            }
        });
}

/// Advances (f, g) to `cfg.steps · cfg.dt`.
pub fn fd_solve(
    f: &SampledField,
    g: &SampledField,
    t_final: f64,
    params: &MediumParams,
    cfg: &FDConfig,
) -> Result<SampledField> {
    f.require_same_grid(g)?;
    let dx = f.grid().dx();
    let courant = params.c() * cfg.dt / dx;
    if courant > 1.0 + 1e-12 {
        return Err(Error::Usage(format!("CFL violated: c·dt/dx = {courant} > 1")));
    }
    if (cfg.dt * cfg.steps as f64 - t_final).abs() > 1e-9 * t_final.abs().max(1.0) {
        return Err(Error::Usage(format!(
            "FD config reaches t = {} but t_final = {t_final}",
            cfg.dt * cfg.steps as f64
        )));
    }
    let grid = *f.grid();
    let n = grid.len();
    if n < 3 || cfg.steps == 0 {
        return Ok(f.clone());
    }
    let dt = cfg.dt;
    let k = params.k();
    let r2 = courant * courant;
    let mut lap = vec![0.0; n];

    let prev: Vec<f64> = f.values().to_vec();
    laplacian_into(&mut lap, &prev);
    // Taylor start: u¹ = u⁰ + dt g + dt²/2 (c² D_xx u⁰ − k g)
    let gv = g.values();
    let mut curr: Vec<f64> = (0..n)
        .map(|i| {
            if i == 0 || i == n - 1 {
                0.0
            } else {
                prev[i] + dt * gv[i] + 0.5 * (r2 * lap[i] - dt * dt * k * gv[i])
            }
        })
        .collect();
    let mut prev = prev;
    prev[0] = 0.0;
    prev[n - 1] = 0.0;

    let a = 1.0 / (1.0 + 0.5 * k * dt);
    let b = 1.0 - 0.5 * k * dt;
    for _ in 1..cfg.steps {
        laplacian_into(&mut lap, &curr);
        // u^{n+1} overwrites u^{n-1}
        prev.par_iter_mut()
            .zip(curr.par_iter())
            .zip(lap.par_iter())
            .with_min_len(PAR_CHUNK)
            .for_each(|((p, &c), &l)| {
                *p = a * (2.0 * c - b * *p + r2 * l);
            });
        prev[0] = 0.0;
        prev[n - 1] = 0.0;
        std::mem::swap(&mut prev, &mut curr);
    }
    SampledField::new(grid, curr)
}
