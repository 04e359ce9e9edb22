//! Batch command-line front end.
//!
//! Exit codes: 0 success, 1 validation failure, 2 usage/config/parse error.

pub mod config;
pub mod output;
mod suites;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use thiserror::Error;

use crate::error::Error as CoreError;
use crate::grid::{SampledField, SpaceGrid};
use crate::kernel::{psi, psi_t_decompose, psi_t_regular, MediumParams};
use crate::measure::MASS_PANELS;
use crate::semigroup::{norm_report, StatePair};
use crate::solver::{solve_delta_family, solve_u, DeltaKind};

use config::{ConfigFile, Resolver};
use output::{atoms_json, num, render_json, Format, Table};

pub use suites::Suite;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Core(#[from] CoreError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        EXIT_USAGE
    }
}

#[derive(Debug, Parser)]
#[command(name = "telegraph", version, about = "Damped wave equation solutions and their numerical cross-checks")]
pub struct Cli {
    /// Key-value configuration file; flags override it.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Output file (stdout when omitted).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Clone, Default)]
pub struct MediumArgs {
    /// Damping rate k >= 0.
    #[arg(long, allow_negative_numbers = true)]
    pub k: Option<f64>,
    /// Wave speed c > 0.
    #[arg(long, allow_negative_numbers = true)]
    pub c: Option<f64>,
}

#[derive(Debug, Args, Clone, Default)]
pub struct GridArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub xmin: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub xmax: Option<f64>,
    /// Grid spacing (ignored by `kernel`, which takes --n).
    #[arg(long)]
    pub dx: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InitKind {
    Gaussian,
    File,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate ψ and the regular part of ψ_t at one time.
    Kernel {
        #[command(flatten)]
        medium: MediumArgs,
        #[arg(long, allow_negative_numbers = true)]
        t: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        xmin: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        xmax: Option<f64>,
        #[arg(long)]
        n: Option<usize>,
    },
    /// Solve the initial value problem for function data.
    Solve {
        #[command(flatten)]
        medium: MediumArgs,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, allow_negative_numbers = true)]
        t: Option<f64>,
        #[arg(long, value_enum)]
        init: Option<InitKind>,
        /// CSV with columns x,f[,g] on a uniform grid (for --init file).
        #[arg(long)]
        file: Option<PathBuf>,
        /// Gaussian width w in f(x) = exp(-(x/w)^2).
        #[arg(long)]
        width: Option<f64>,
    },
    /// Closed-form solution for δ-type data as atoms plus a density.
    Delta {
        #[command(flatten)]
        medium: MediumArgs,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, value_enum)]
        kind: Option<DeltaKind>,
        #[arg(long, allow_negative_numbers = true)]
        t: Option<f64>,
    },
    /// Run oracle comparisons; exits 1 if any fails.
    Validate {
        #[command(flatten)]
        medium: MediumArgs,
        #[arg(long, value_enum)]
        suite: Option<Suite>,
        #[arg(long, allow_negative_numbers = true)]
        t: Option<f64>,
        #[arg(long)]
        seed: Option<u64>,
        /// Grid spacing for the fd, duhamel and semigroup suites.
        #[arg(long)]
        dx: Option<f64>,
        #[arg(long)]
        courant: Option<f64>,
        #[arg(long)]
        walkers: Option<usize>,
        /// Lattice time step of the random walk.
        #[arg(long)]
        walk_dt: Option<f64>,
        #[arg(long)]
        slabs: Option<usize>,
        #[arg(long)]
        probe: Option<f64>,
    },
    /// L² norms of Γ_t applied to Gaussian data at several times.
    Norms {
        #[command(flatten)]
        medium: MediumArgs,
        #[command(flatten)]
        grid: GridArgs,
        /// Comma-separated ascending times.
        #[arg(long, value_delimiter = ',')]
        times: Option<Vec<f64>>,
        #[arg(long)]
        width: Option<f64>,
    },
}

/// Rendered output plus the process exit code.
#[derive(Debug)]
pub struct Outcome {
    pub text: String,
    pub exit_code: i32,
}

fn medium(r: &mut Resolver, m: &MediumArgs) -> Result<MediumParams, CliError> {
    let k = r.f64("k", m.k, 1.0)?;
    let c = r.f64("c", m.c, 1.0)?;
    Ok(MediumParams::new(k, c)?)
}

fn gaussian(grid: SpaceGrid, width: f64) -> SampledField {
    SampledField::from_fn(grid, |x| (-(x / width) * (x / width)).exp())
}

/// Reads `x,f[,g]` rows (header optional) from a uniform grid.
pub fn read_initial_data(text: &str) -> Result<(SampledField, SampledField), CliError> {
    let mut xs = Vec::new();
    let mut fs = Vec::new();
    let mut gs = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let cols: Vec<&str> = line.split(',').map(str::trim).collect();
        let parsed: Result<Vec<f64>, _> = cols.iter().map(|c| c.parse::<f64>()).collect();
        match parsed {
            Ok(v) if v.len() == 2 || v.len() == 3 => {
                xs.push(v[0]);
                fs.push(v[1]);
                gs.push(v.get(2).copied().unwrap_or(0.0));
            }
            Err(_) if xs.is_empty() && lineno == 0 => continue, // header
            _ => {
                return Err(CliError::Parse(format!(
                    "line {}: expected `x,f[,g]` numbers, got `{line}`",
                    lineno + 1
                )))
            }
        }
    }
    if xs.len() < 2 {
        return Err(CliError::Parse("initial data needs at least two rows".into()));
    }
    let dx = (xs[xs.len() - 1] - xs[0]) / (xs.len() - 1) as f64;
    for (i, x) in xs.iter().enumerate() {
        if (x - (xs[0] + i as f64 * dx)).abs() > 1e-9 * dx.abs().max(1.0) {
            return Err(CliError::Parse(format!("x column is not uniformly spaced at row {}", i + 1)));
        }
    }
    let grid = SpaceGrid::new(xs[0], dx, xs.len()).map_err(|e| CliError::Parse(e.to_string()))?;
    let f = SampledField::new(grid, fs).map_err(|e| CliError::Parse(e.to_string()))?;
    let g = SampledField::new(grid, gs).map_err(|e| CliError::Parse(e.to_string()))?;
    Ok((f, g))
}

fn finish(format: Format, table: Table, json: Value) -> Outcome {
    Outcome {
        text: match format {
            Format::Csv => table.render(),
            Format::Json => render_json(&json),
        },
        exit_code: EXIT_OK,
    }
}

/// Runs one command and renders its output. Nothing is written here.
pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let file = match &cli.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::default(),
    };
    let mut r = Resolver::new(&file);
    let format = r.choice("format", cli.format, Format::Csv)?;

    match &cli.command {
        Command::Kernel { medium: m, t, xmin, xmax, n } => {
            let params = medium(&mut r, m)?;
            let t = r.f64("t", *t, 1.0)?;
            let xmin = r.f64("xmin", *xmin, -2.0)?;
            let xmax = r.f64("xmax", *xmax, 2.0)?;
            let n = r.usize("n", *n, 401)?;
            let grid = SpaceGrid::from_range(xmin, xmax, n)?;
            let (atoms, _) = psi_t_decompose(t, &params)?;
            let atoms = [
                crate::Atom::new(atoms.positions[0], atoms.weights[0]),
                crate::Atom::new(atoms.positions[1], atoms.weights[1]),
            ];
            let mut table = Table::new(vec!["x", "psi", "psi_t_regular"]);
            table.atoms_preamble(&atoms);
            let mut rows = Vec::with_capacity(n);
            for x in grid.points() {
                let a = psi(x, t, &params)?;
                let b = psi_t_regular(x, t, &params)?;
                table.push_numbers(&[x, a, b]);
                rows.push(json!({"x": x, "psi": a, "psi_t_regular": b}));
            }
            let json = json!({"config": r.effective, "atoms": atoms_json(&atoms), "rows": rows});
            Ok(finish(format, table, json))
        }
        Command::Solve { medium: m, grid: ga, t, init, file: path, width } => {
            let params = medium(&mut r, m)?;
            let t = r.f64("t", *t, 1.0)?;
            let init = r.choice("init", *init, InitKind::Gaussian)?;
            let (f, g) = match init {
                InitKind::Gaussian => {
                    let width = r.f64("width", *width, 1.0)?;
                    if !(width > 0.0) {
                        return Err(CliError::Config(format!("width must be > 0, got {width}")));
                    }
                    let xmin = r.f64("xmin", ga.xmin, -8.0)?;
                    let xmax = r.f64("xmax", ga.xmax, 8.0)?;
                    let dx = r.f64("dx", ga.dx, 1.0 / 256.0)?;
                    let grid = SpaceGrid::with_spacing(xmin, xmax, dx)?;
                    (gaussian(grid, width), SampledField::zeros(grid))
                }
                InitKind::File => {
                    let path = r
                        .text("file", path.as_ref().map(|p| p.display().to_string()))
                        .ok_or_else(|| CliError::Config("--init file needs --file".into()))?;
                    let text = std::fs::read_to_string(&path)
                        .map_err(|e| CliError::Parse(format!("cannot read {path}: {e}")))?;
                    read_initial_data(&text)?
                }
            };
            let u = solve_u(&f, &g, t, &params)?;
            let mut table = Table::new(vec!["x", "u"]);
            table.preamble.push(format!("error_estimate,{}", num(u.error_estimate)));
            let mut rows = Vec::with_capacity(f.grid().len());
            for (x, v) in f.grid().points().zip(u.field.values()) {
                table.push_numbers(&[x, *v]);
                rows.push(json!({"x": x, "u": v}));
            }
            let json = json!({
                "config": r.effective,
                "error_estimate": u.error_estimate,
                "rows": rows,
            });
            Ok(finish(format, table, json))
        }
        Command::Delta { medium: m, grid: ga, kind, t } => {
            let params = medium(&mut r, m)?;
            let kind = r.choice("kind", *kind, DeltaKind::DeltaPosition)?;
            let t = r.f64("t", *t, 1.0)?;
            let reach = params.c() * t.abs();
            let xmin = r.f64("xmin", ga.xmin, -reach - 1.0)?;
            let xmax = r.f64("xmax", ga.xmax, reach + 1.0)?;
            let dx = r.f64("dx", ga.dx, 1.0 / 256.0)?;
            let grid = SpaceGrid::with_spacing(xmin, xmax, dx)?;
            let m = solve_delta_family(kind, t, &params, &grid)?;
            let atom_mass = m.atom_mass();
            let density_mass = m.density_mass(MASS_PANELS);
            let total = atom_mass + density_mass;
            let samples = m.density.as_ref().expect("delta solutions are tabulated");
            let mut table = Table::new(vec!["x", "v"]);
            table.atoms_preamble(&m.atoms);
            table.preamble.push(format!(
                "mass,{},{},{}",
                num(atom_mass),
                num(density_mass),
                num(total)
            ));
            let mut density = Vec::with_capacity(grid.len());
            for (x, v) in grid.points().zip(samples.values()) {
                table.push_numbers(&[x, *v]);
                density.push(json!({"x": x, "v": v}));
            }
            let json = json!({
                "config": r.effective,
                "atoms": atoms_json(&m.atoms),
                "density": density,
                "mass": {"atoms": atom_mass, "density": density_mass, "total": total},
            });
            Ok(finish(format, table, json))
        }
        Command::Validate {
            medium: m,
            suite,
            t,
            seed,
            dx,
            courant,
            walkers,
            walk_dt,
            slabs,
            probe,
        } => {
            let params = medium(&mut r, m)?;
            let suite = r.choice("suite", *suite, Suite::All)?;
            let settings = suites::Settings {
                t: r.f64("t", *t, 1.0)?,
                seed: r.u64("seed", *seed, 7)?,
                dx: r.f64("dx", *dx, 1.0 / 512.0)?,
                courant: r.f64("courant", *courant, 0.9)?,
                walkers: r.usize("walkers", *walkers, 1_000_000)?,
                walk_dt: r.f64("walk_dt", *walk_dt, 1e-3)?,
                slabs: r.usize("slabs", *slabs, 32)?,
                probe: r.f64("probe", *probe, 1e-3)?,
            };
            let reports = suites::run(suite, &params, &settings)?;
            let all_pass = reports.iter().all(|rep| rep.pass);
            let mut table = Table::new(vec!["name", "metric", "value", "tolerance", "pass"]);
            for rep in &reports {
                let metric = serde_json::to_value(rep.metric)
                    .ok()
                    .and_then(|v| v.as_str().map(str::to_string))
                    .unwrap_or_default();
                table.rows.push(vec![
                    rep.name.clone(),
                    metric,
                    num(rep.value),
                    num(rep.tolerance),
                    rep.pass.to_string(),
                ]);
            }
            let json = json!({"config": r.effective, "reports": reports, "pass": all_pass});
            let mut out = finish(format, table, json);
            if !all_pass {
                out.exit_code = EXIT_VALIDATION;
            }
            Ok(out)
        }
        Command::Norms { medium: m, grid: ga, times, width } => {
            let params = medium(&mut r, m)?;
            let times = r.list("times", times.clone(), &[0.5, 1.0, 2.0, 4.0])?;
            let width = r.f64("width", *width, 1.0)?;
            let horizon = times.iter().fold(0.0f64, |a, &b| a.max(b)) * params.c();
            let xmin = r.f64("xmin", ga.xmin, -(8.0 + horizon).ceil())?;
            let xmax = r.f64("xmax", ga.xmax, (8.0 + horizon).ceil())?;
            let dx = r.f64("dx", ga.dx, 1.0 / 64.0)?;
            let grid = SpaceGrid::with_spacing(xmin, xmax, dx)?;
            let state = StatePair::new(gaussian(grid, width), SampledField::zeros(grid))?;
            let rows = norm_report(&state, &params, &times)?;
            let mut table = Table::new(vec!["t", "u_l2", "ut_l2", "ux_l2", "envelope"]);
            for row in &rows {
                table.push_numbers(&[row.t, row.u_l2, row.ut_l2, row.ux_l2, row.envelope]);
            }
            let json = json!({"config": r.effective, "rows": rows});
            Ok(finish(format, table, json))
        }
    }
}
