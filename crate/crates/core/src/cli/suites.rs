//! Oracle suites driven by `telegraph validate`.

use serde::Serialize;

use crate::grid::{SampledField, SpaceGrid};
use crate::kernel::MediumParams;
use crate::oracles::{
    binomial_sigma, duhamel_residual, fd_solve, prw_simulate, DuhamelConfig, FDConfig, FirstStep, Metric,
    ValidationReport, WalkConfig,
};
use crate::semigroup::{gamma_with_probe, StatePair};
use crate::solver::{solve_delta_family, solve_u, DeltaKind};

use super::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Fd,
    Walk,
    Duhamel,
    Semigroup,
    All,
}

#[derive(Debug, Clone, Copy)]
pub struct Settings {
    pub t: f64,
    pub seed: u64,
    pub dx: f64,
    pub courant: f64,
    pub walkers: usize,
    pub walk_dt: f64,
    pub slabs: usize,
    pub probe: f64,
}

pub const FD_TOL: f64 = 1e-3;
pub const TV_TOL: f64 = 0.02;
pub const DUHAMEL_TOL: f64 = 1e-4;
pub const DUHAMEL_TOL_UNDAMPED: f64 = 1e-8;
pub const SEMIGROUP_TOL: f64 = 1e-5;
/// Gaussian data e^{-x²} are below 1e-15 beyond this radius.
const DATA_RADIUS: f64 = 6.0;

fn gaussian_pair(grid: SpaceGrid) -> (SampledField, SampledField) {
    (SampledField::from_fn(grid, |x| (-x * x).exp()), SampledField::zeros(grid))
}

/// Symmetric grid wide enough that nothing reaches the ends within `horizon`.
fn isolated_grid(params: &MediumParams, horizon: f64, dx: f64) -> Result<SpaceGrid, CliError> {
    if !(horizon > 0.0) {
        return Err(CliError::Config(format!("t must be > 0, got {horizon}")));
    }
    let half = (DATA_RADIUS + 2.0 + params.c() * horizon).ceil().max(8.0);
    Ok(SpaceGrid::with_spacing(-half, half, dx)?)
}

fn fd_suite(params: &MediumParams, s: &Settings) -> Result<Vec<ValidationReport>, CliError> {
    let grid = isolated_grid(params, s.t, s.dx)?;
    let (f, g) = gaussian_pair(grid);
    let cfg = FDConfig::for_final_time(s.t, s.dx, params, s.courant)?;
    let fd = fd_solve(&f, &g, s.t, params, &cfg)?;
    let exact = solve_u(&f, &g, s.t, params)?;
    let err = fd.rel_l2_error(&exact.field)?;
    Ok(vec![ValidationReport::new("fd_vs_convolution", Metric::RelL2, err, FD_TOL)])
}

fn walk_suite(params: &MediumParams, s: &Settings) -> Result<Vec<ValidationReport>, CliError> {
    let cfg = WalkConfig::from_continuum(params, s.walk_dt, s.t, s.walkers, s.seed, FirstStep::Symmetric)?;
    let hist = prw_simulate(&cfg)?;
    let t_lattice = cfg.n_steps as f64 * cfg.dt;
    let reach = params.c() * t_lattice;
    let grid = SpaceGrid::with_spacing(-reach - 1.0, reach + 1.0, cfg.dx)?;
    let target = solve_delta_family(DeltaKind::DeltaPosition, t_lattice, params, &grid)?;
    let tv = hist.tv_distance(&target, 8);
    let expected = cfg.p.powi(cfg.n_steps as i32);
    let sigma = binomial_sigma(expected, cfg.n_walkers);
    let frac = hist.never_flipped_fraction();
    Ok(vec![
        ValidationReport::new("walk_vs_delta_position", Metric::TvDistance, tv, TV_TOL),
        ValidationReport::new("never_flipped_fraction", Metric::AtomError, (frac - expected).abs(), 3.0 * sigma),
    ])
}

fn duhamel_suite(params: &MediumParams, s: &Settings) -> Result<Vec<ValidationReport>, CliError> {
    let dx = s.dx.max(1.0 / 128.0);
    let grid = isolated_grid(params, s.t, dx)?;
    let (f, g) = gaussian_pair(grid);
    let cfg = DuhamelConfig {
        slabs: s.slabs,
        ..DuhamelConfig::default()
    };
    let res = duhamel_residual(&f, &g, s.t, params, &cfg)?;
    let tol = if params.k() == 0.0 { DUHAMEL_TOL_UNDAMPED } else { DUHAMEL_TOL };
    Ok(vec![ValidationReport::new("duhamel_fixed_point", Metric::MaxAbs, res, tol)])
}

fn semigroup_suite(params: &MediumParams, s: &Settings) -> Result<Vec<ValidationReport>, CliError> {
    let half_t = s.t;
    let total = 2.0 * half_t;
    let grid = isolated_grid(params, total, s.dx)?;
    let (f, g) = gaussian_pair(grid);
    let state = StatePair::new(f, g)?;
    let direct = gamma_with_probe(total, &state, params, s.probe)?.state;
    let once = gamma_with_probe(half_t, &state, params, s.probe)?.state;
    let twice = gamma_with_probe(half_t, &once, params, s.probe)?.state;
    let shrink = params.c() * total;
    let (a, b) = (grid.x0() + shrink, grid.x_end() - shrink);
    let err = twice.rel_l2_error_on(&direct, a, b)?;
    Ok(vec![ValidationReport::new("semigroup_composition", Metric::RelL2, err, SEMIGROUP_TOL)])
}

pub fn run(suite: Suite, params: &MediumParams, s: &Settings) -> Result<Vec<ValidationReport>, CliError> {
    let mut out = Vec::new();
    if matches!(suite, Suite::Fd | Suite::All) {
        out.extend(fd_suite(params, s)?);
    }
    if matches!(suite, Suite::Walk | Suite::All) {
        out.extend(walk_suite(params, s)?);
    }
    if matches!(suite, Suite::Duhamel | Suite::All) {
        out.extend(duhamel_suite(params, s)?);
    }
    if matches!(suite, Suite::Semigroup | Suite::All) {
        out.extend(semigroup_suite(params, s)?);
    }
    Ok(out)
}
