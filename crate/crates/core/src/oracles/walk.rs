//! Persistent random walk on the lattice {j·dx}: each step repeats the
//! previous move with probability p and reverses it otherwise.
//!
//! Walker i draws from a ChaCha8 stream selected by (seed, i), so results do
//! not depend on how walkers are split across threads. Runs of repeated moves
//! are sampled as geometric waiting times, which is exact in distribution.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernel::MediumParams;
use crate::measure::MixedMeasure;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum FirstStep {
    Up,
    Down,
    Symmetric,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WalkConfig {
    pub p: f64,
    pub dx: f64,
    pub dt: f64,
    pub n_steps: usize,
    pub n_walkers: usize,
    pub seed: u64,
    pub first_step: FirstStep,
}

impl WalkConfig {
    /// Walk matched to the continuum medium up to time `t` (rounded to whole
    /// steps).
    pub fn from_continuum(
        params: &MediumParams,
        dt: f64,
        t: f64,
        n_walkers: usize,
        seed: u64,
        first_step: FirstStep,
    ) -> Result<Self> {
        let (p, dx) = prw_params_from_continuum(params, dt)?;
        if !(t > 0.0) {
            return Err(Error::Usage(format!("walk horizon must be > 0, got {t}")));
        }
        let cfg = WalkConfig {
            p,
            dx,
            dt,
            n_steps: (t / dt).round() as usize,
            n_walkers,
            seed,
            first_step,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.p) {
            return Err(Error::Usage(format!("repeat probability {} outside [0, 1]", self.p)));
        }
        if !(self.dx > 0.0) || !(self.dt > 0.0) {
            return Err(Error::Usage("walk needs dx > 0 and dt > 0".into()));
        }
        if self.n_steps == 0 || self.n_walkers == 0 {
            return Err(Error::Usage("walk needs at least one step and one walker".into()));
        }
        Ok(())
    }

    /// Probability that a walker never reverses: p^(n−1), the first move
    /// being drawn from the first-step policy.
    pub fn never_flip_probability(&self) -> f64 {
        self.p.powi(self.n_steps as i32 - 1)
    }
}

/// p = 1 − k·dt/2 and dx = c·dt.
pub fn prw_params_from_continuum(params: &MediumParams, dt: f64) -> Result<(f64, f64)> {
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::Usage(format!("time step must be > 0, got {dt}")));
    }
    if params.k() * dt > 2.0 {
        return Err(Error::Usage(format!(
            "k·dt = {} exceeds 2; repeat probability would be negative",
            params.k() * dt
        )));
    }
    Ok((1.0 - 0.5 * params.k() * dt, params.c() * dt))
}

/// Final positions of all walkers, in lattice units.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LatticeHistogram {
    pub dx: f64,
    pub n_steps: usize,
    pub n_walkers: usize,
    /// counts[j] = walkers that reversed at least once and ended at site j − n
    pub counts: Vec<u64>,
    pub never_flipped_up: u64,
    pub never_flipped_down: u64,
}

impl LatticeHistogram {
    fn empty(cfg: &WalkConfig) -> Self {
        LatticeHistogram {
            dx: cfg.dx,
            n_steps: cfg.n_steps,
            n_walkers: 0,
            counts: vec![0; 2 * cfg.n_steps + 1],
            never_flipped_up: 0,
            never_flipped_down: 0,
        }
    }

    fn merge(mut self, other: LatticeHistogram) -> Self {
        for (a, b) in self.counts.iter_mut().zip(other.counts) {
            *a += b;
        }
        self.n_walkers += other.n_walkers;
        self.never_flipped_up += other.never_flipped_up;
        self.never_flipped_down += other.never_flipped_down;
        self
    }

    pub fn never_flipped_fraction(&self) -> f64 {
        (self.never_flipped_up + self.never_flipped_down) as f64 / self.n_walkers as f64
    }

    pub fn reach(&self) -> f64 {
        self.n_steps as f64 * self.dx
    }

    /// Empirical atom masses at (−n·dx, +n·dx).
    pub fn atom_masses(&self) -> (f64, f64) {
        let n = self.n_walkers as f64;
        (self.never_flipped_down as f64 / n, self.never_flipped_up as f64 / n)
    }

    /// Sites reachable after a reversal: parity of n, |j| ≤ n − 2. Each one
    /// stands for a bin of width 2·dx; the outermost bins extend to ±n·dx so
    /// that the bins tile the open cone.
    fn bins(&self) -> Vec<(i64, f64, f64)> {
        let n = self.n_steps as i64;
        let dx = self.dx;
        let reach = self.reach();
        let mut out = Vec::new();
        let mut j = -(n - 2);
        while j <= n - 2 {
            let centre = j as f64 * dx;
            let lo = if j == -(n - 2) { -reach } else { centre - dx };
            let hi = if j == n - 2 { reach } else { centre + dx };
            out.push((j, lo, hi));
            j += 2;
        }
        out
    }

    /// Total-variation distance between the empirical law and `target`,
    /// after projecting the target onto the same atoms and bins. Density mass
    /// is integrated per bin with Simpson.
    pub fn tv_distance(&self, target: &MixedMeasure, panels_per_bin: usize) -> f64 {
        let n = self.n_walkers as f64;
        let reach = self.reach();
        let half = 0.5 * self.dx;
        let bins = self.bins();

        let mut atom_target = [0.0f64; 2];
        let mut bin_target = vec![0.0f64; bins.len()];
        for a in &target.atoms {
            if (a.position + reach).abs() <= half {
                atom_target[0] += a.weight;
            } else if (a.position - reach).abs() <= half {
                atom_target[1] += a.weight;
            } else if let Some(b) = bins.iter().position(|&(_, lo, hi)| a.position >= lo && a.position < hi) {
                bin_target[b] += a.weight;
            }
        }
        for (b, &(_, lo, hi)) in bins.iter().enumerate() {
            bin_target[b] += target.density_mass_between(lo, hi, panels_per_bin);
        }

        let (down, up) = self.atom_masses();
        let mut l1 = (down - atom_target[0]).abs() + (up - atom_target[1]).abs();
        let offset = self.n_steps as i64;
        for (b, &(j, _, _)) in bins.iter().enumerate() {
            let emp = self.counts[(j + offset) as usize] as f64 / n;
            l1 += (emp - bin_target[b]).abs();
        }
        0.5 * l1
    }
}

/// Final lattice offset of one walker and whether it ever reversed.
fn walk_one(cfg: &WalkConfig, rng: &mut ChaCha8Rng) -> (i64, bool) {
    let mut dir: i64 = match cfg.first_step {
        FirstStep::Up => 1,
        FirstStep::Down => -1,
        FirstStep::Symmetric => {
            if rng.gen::<bool>() {
                1
            } else {
                -1
            }
        }
    };
    let mut pos = dir;
    let mut remaining = cfg.n_steps as i64 - 1;
    let mut flipped = false;
    let ln_p = cfg.p.ln();
    while remaining > 0 {
        // steps until the next reversal, counting the reversing step
        let wait = if cfg.p >= 1.0 {
            i64::MAX
        } else if cfg.p <= 0.0 {
            1
        } else {
            let u: f64 = 1.0 - rng.gen::<f64>(); // (0, 1]
            let extra = (u.ln() / ln_p).floor();
            if extra >= remaining as f64 {
                i64::MAX
            } else {
                1 + extra as i64
            }
        };
        if wait > remaining {
            pos += dir * remaining;
            break;
        }
        pos += dir * (wait - 1);
        dir = -dir;
        pos += dir;
        remaining -= wait;
        flipped = true;
    }
    (pos, flipped)
}

const WALKER_CHUNK: usize = 8192;

/// Runs `cfg.n_walkers` independent walks of `cfg.n_steps` steps.
pub fn prw_simulate(cfg: &WalkConfig) -> Result<LatticeHistogram> {
    cfg.validate()?;
    let offset = cfg.n_steps as i64;
    let chunks = cfg.n_walkers.div_ceil(WALKER_CHUNK);
    let hist = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut h = LatticeHistogram::empty(cfg);
            let start = c * WALKER_CHUNK;
            let end = (start + WALKER_CHUNK).min(cfg.n_walkers);
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            for i in start..end {
                rng.set_stream(i as u64);
                rng.set_word_pos(0);
                let (pos, flipped) = walk_one(cfg, &mut rng);
                if flipped {
                    h.counts[(pos + offset) as usize] += 1;
                } else if pos > 0 {
                    h.never_flipped_up += 1;
                } else {
                    h.never_flipped_down += 1;
                }
            }
            h.n_walkers = end - start;
            h
        })
        .reduce(|| LatticeHistogram::empty(cfg), LatticeHistogram::merge);
    Ok(hist)
}

/// Binomial standard deviation of a fraction with success probability `q`.
pub fn binomial_sigma(q: f64, n: usize) -> f64 {
    (q * (1.0 - q) / n as f64).sqrt()
}
