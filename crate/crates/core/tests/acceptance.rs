//! Acceptance criteria. Runs every criterion, prints one PASS/FAIL line each
//! and exits non-zero if any failed.

use std::time::{Duration, Instant};

use telegraph_core::bessel::{bessel_i0, bessel_i1};
use telegraph_core::grid::{SampledField, SpaceGrid};
use telegraph_core::kernel::{psi, MediumParams};
use telegraph_core::oracles::{
    binomial_sigma, duhamel_residual, fd_solve, prw_simulate, DuhamelConfig, FDConfig, FirstStep, WalkConfig,
};
use telegraph_core::semigroup::{gamma_with_probe, norm_report, StatePair};
use telegraph_core::solver::{propagate_v, solve_delta_family, solve_u, velocity_v, DeltaKind};

fn medium(k: f64, c: f64) -> MediumParams {
    MediumParams::new(k, c).unwrap()
}

fn verdict(id: u32, what: &str, pass: bool, detail: String) -> bool {
    println!("[{}] criterion {id}: {what}: {detail}", if pass { "PASS" } else { "FAIL" });
    pass
}

fn within_runtime(start: Instant, limit: Duration) -> (bool, String) {
    let elapsed = start.elapsed();
    (elapsed < limit, format!("runtime {:.2?} (limit {:?})", elapsed, limit))
}

fn gaussian(grid: SpaceGrid) -> SampledField {
    SampledField::from_fn(grid, |x| (-x * x).exp())
}

/// Σ (z²/4)^m / (m! (m+ν)!) · (z/2)^ν summed until terms are negligible.
fn series_oracle(z: f64, order: u32) -> f64 {
    let q = z * z / 4.0;
    let mut term = if order == 0 { 1.0 } else { z / 2.0 };
    let mut sum = term;
    for m in 1..1000 {
        term *= q / (m as f64 * (m + order) as f64);
        sum += term;
        if term < 1e-20 * sum {
            break;
        }
    }
    sum
}

fn criterion_01_bessel_accuracy() -> bool {
    let start = Instant::now();
    let (lo, hi) = (1e-8f64.ln(), 50f64.ln());
    let mut worst = 0.0f64;
    for i in 0..1000 {
        let z = (lo + (hi - lo) * i as f64 / 999.0).exp();
        for (order, value) in [(0, bessel_i0(z).unwrap()), (1, bessel_i1(z).unwrap())] {
            let exact = series_oracle(z, order);
            // absolute below 1, relative above: I₀(50) ≈ 3e20 has no absolute 1e-12 digit
            let err = (value - exact).abs() / exact.abs().max(1.0);
            worst = worst.max(err);
        }
    }
    let h = 1e-4;
    let mut worst_ode = 0.0f64;
    for z in [0.5, 1.0, 2.0, 5.0, 10.0] {
        let i0 = |x: f64| bessel_i0(x).unwrap();
        let second = (i0(z + h) - 2.0 * i0(z) + i0(z - h)) / (h * h);
        let r = z * z * second + z * bessel_i1(z).unwrap() - z * z * i0(z);
        worst_ode = worst_ode.max(r.abs() / (z * z * i0(z)).max(1.0));
    }
    let (fast, rt) = within_runtime(start, Duration::from_secs(1));
    let ok = worst <= 1e-12 && worst_ode < 1e-6 && fast;
    verdict(
        1,
        "Bessel accuracy",
        ok,
        format!("max scaled error {worst:.2e} (tol 1e-12), ODE residual {worst_ode:.2e} (tol 1e-6), {rt}")
    )
}

fn criterion_02_kernel_point_values() -> bool {
    let start = Instant::now();
    let p = medium(4.0, 1.0);
    let centre = psi(0.0, 1.0, &p).unwrap();
    let centre_err = (centre - series_oracle(2.0, 0) / 2.0).abs();
    let mut boundary_ok = true;
    for (k, c, t) in [(4.0, 1.0, 1.0f64), (1.0, 2.0, 0.75), (0.5, 0.5, -2.0), (3.0, 1.5, 2.0)] {
        let m = medium(k, c);
        let expect = t.signum() / (2.0 * c);
        for x in [c * t, -c * t] {
            boundary_ok &= psi(x, t, &m).unwrap() == expect;
        }
    }
    // deterministic xorshift samples
    let mut state = 0x9E37_79B9_7F4A_7C15u64;
    let mut next = || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        (state >> 11) as f64 / (1u64 << 53) as f64
    };
    let mut symmetric = true;
    let m = medium(2.5, 1.3);
    for _ in 0..10_000 {
        let x = 6.0 * next() - 3.0;
        let t = 4.0 * next() - 2.0;
        let v = psi(x, t, &m).unwrap();
        symmetric &= psi(x, -t, &m).unwrap() == -v;
        symmetric &= psi(-x, t, &m).unwrap() == v;
        if x.abs() > m.c() * t.abs() {
            symmetric &= v == 0.0;
        }
    }
    let (fast, rt) = within_runtime(start, Duration::from_secs(1));
    let ok = centre_err <= 1e-12 && boundary_ok && symmetric && fast;
    verdict(
        2,
        "kernel point values",
        ok,
        format!("|psi(0,1) - I0(2)/2| = {centre_err:.2e}, boundary exact: {boundary_ok}, symmetries exact: {symmetric}, {rt}")
    )
}

fn criterion_03_dalembert_reduction() -> bool {
    let start = Instant::now();
    let grid = SpaceGrid::with_spacing(-8.0, 8.0, 1.0 / 256.0).unwrap();
    let f = gaussian(grid);
    // g = G′ with G = e^{-x²}, so (1/2c)∫_{x−ct}^{x+ct} g = [G(x+ct) − G(x−ct)]/(2c)
    let g = SampledField::from_fn(grid, |x| -2.0 * x * (-x * x).exp());
    let (c, t) = (1.0, 1.0);
    let u = solve_u(&f, &g, t, &medium(0.0, c)).unwrap();
    let big_g = |x: f64| (-x * x).exp();
    let mut worst = 0.0f64;
    for (x, v) in grid.points().zip(u.field.values()) {
        let exact = 0.5 * (big_g(x + c * t) + big_g(x - c * t)) + (big_g(x + c * t) - big_g(x - c * t)) / (2.0 * c);
        worst = worst.max((v - exact).abs());
    }
    let (fast, rt) = within_runtime(start, Duration::from_secs(5));
    verdict(
        3,
        "D'Alembert reduction at k=0",
        worst < 1e-8 && fast,
        format!("max-abs {worst:.2e} (tol 1e-8), {rt}")
    )
}

fn fd_error(dx: f64) -> f64 {
    let p = medium(1.0, 1.0);
    let grid = SpaceGrid::with_spacing(-8.0, 8.0, dx).unwrap();
    let f = gaussian(grid);
    let g = SampledField::zeros(grid);
    let cfg = FDConfig::for_final_time(1.0, dx, &p, 0.9).unwrap();
    let fd = fd_solve(&f, &g, 1.0, &p, &cfg).unwrap();
    let exact = solve_u(&f, &g, 1.0, &p).unwrap();
    fd.rel_l2_error(&exact.field).unwrap()
}

fn criterion_04_fd_cross_oracle() -> bool {
    let start = Instant::now();
    let coarse = fd_error(1.0 / 512.0);
    let fine = fd_error(1.0 / 1024.0);
    let factor = coarse / fine;
    let (fast, rt) = within_runtime(start, Duration::from_secs(30));
    let ok = coarse < 1e-3 && (3.5..=4.5).contains(&factor) && fast;
    verdict(
        4,
        "finite-difference agreement",
        ok,
        format!("rel L2 {coarse:.3e} (tol 1e-3), refinement factor {factor:.3} (want [3.5, 4.5]), {rt}")
    )
}

fn criterion_05_mass_conservation() -> bool {
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut atom_err = 0.0f64;
    for (k, c, t) in [(1.0, 1.0, 1.0), (2.0, 0.5, 1.5), (0.5, 2.0, 2.0)] {
        let p = medium(k, c);
        let reach = c * t;
        let grid = SpaceGrid::with_spacing(-reach - 0.5, reach + 0.5, 1.0 / 128.0).unwrap();
        for kind in [DeltaKind::DeltaPosition, DeltaKind::Financial] {
            let m = solve_delta_family(kind, t, &p, &grid).unwrap();
            worst = worst.max((m.total_mass(10_000) - 1.0).abs());
            if kind == DeltaKind::Financial {
                atom_err = atom_err.max((m.atoms[0].weight - (-k * t / 2.0).exp()).abs());
            }
        }
    }
    let (fast, rt) = within_runtime(start, Duration::from_secs(10));
    let ok = worst < 1e-6 && atom_err <= 1e-15 && fast;
    verdict(
        5,
        "mass conservation",
        ok,
        format!("max |mass - 1| {worst:.2e} (tol 1e-6), financial atom error {atom_err:.1e} (tol 1e-15), {rt}")
    )
}

fn criterion_06_monte_carlo_lattice_limit() -> bool {
    let start = Instant::now();
    let p = medium(1.0, 1.0);
    let cfg = WalkConfig::from_continuum(&p, 1e-3, 1.0, 1_000_000, 20_240_601, FirstStep::Symmetric).unwrap();
    assert_eq!(cfg.n_steps, 1000);
    let hist = prw_simulate(&cfg).unwrap();
    let grid = SpaceGrid::with_spacing(-2.0, 2.0, cfg.dx).unwrap();
    let target = solve_delta_family(DeltaKind::DeltaPosition, 1.0, &p, &grid).unwrap();
    let tv = hist.tv_distance(&target, 8);
    let expected = cfg.p.powi(1000);
    let sigma = binomial_sigma(expected, cfg.n_walkers);
    let frac = hist.never_flipped_fraction();
    let (fast, rt) = within_runtime(start, Duration::from_secs(120));
    let ok = tv < 0.02 && (frac - expected).abs() <= 3.0 * sigma && fast;
    verdict(
        6,
        "Monte Carlo lattice limit",
        ok,
        format!(
            "TV {tv:.4} (tol 0.02), never-flipped {frac:.5} vs p^1000 = {expected:.5} ({:.2} sigma), {rt}",
            (frac - expected).abs() / sigma
        )
    )
}

fn criterion_07_semigroup_law() -> bool {
    let start = Instant::now();
    let p = medium(1.0, 1.0);
    let grid = SpaceGrid::with_spacing(-10.0, 10.0, 1.0 / 512.0).unwrap();
    let state = StatePair::new(gaussian(grid), SampledField::zeros(grid)).unwrap();
    let probe = 1e-3;
    let direct = gamma_with_probe(2.0, &state, &p, probe).unwrap().state;
    let once = gamma_with_probe(1.0, &state, &p, probe).unwrap().state;
    let twice = gamma_with_probe(1.0, &once, &p, probe).unwrap().state;
    let (a, b) = (grid.x0() + 2.0, grid.x_end() - 2.0);
    let eu = twice.u.rel_l2_error_on(&direct.u, a, b).unwrap();
    let et = twice.ut.rel_l2_error_on(&direct.ut, a, b).unwrap();
    let (fast, rt) = within_runtime(start, Duration::from_secs(60));
    let ok = eu < 1e-5 && et < 1e-5 && fast;
    verdict(
        7,
        "semigroup law",
        ok,
        format!("rel L2 u {eu:.2e}, u_t {et:.2e} (tol 1e-5), {rt}")
    )
}

fn criterion_08_time_reversal() -> bool {
    let start = Instant::now();
    let p = medium(1.0, 1.0);
    let grid = SpaceGrid::with_spacing(-8.0, 8.0, 1.0 / 256.0).unwrap();
    let f = gaussian(grid);
    let g = SampledField::from_fn(grid, |x| x * (-x * x).exp());
    let h = g.combine(1.0, &f, 0.5 * p.k()).unwrap();
    let probe = 1e-3;
    let v1 = propagate_v(&f, &h, 1.0, &p).unwrap().field;
    let w1 = velocity_v(&f, &h, 1.0, &p, probe).unwrap().field.map(|v| -v);
    let v2 = propagate_v(&v1, &w1, 1.0, &p).unwrap().field;
    let w2 = velocity_v(&v1, &w1, 1.0, &p, probe).unwrap().field.map(|v| -v);
    let ef = v2.rel_l2_error(&f).unwrap();
    let eh = w2.rel_l2_error(&h).unwrap();
    let (fast, rt) = within_runtime(start, Duration::from_secs(60));
    let ok = ef < 1e-5 && eh < 1e-5 && fast;
    verdict(
        8,
        "time reversal of v",
        ok,
        format!("rel L2 f {ef:.2e}, g+(k/2)f {eh:.2e} (tol 1e-5), {rt}")
    )
}

/// Residuals below this are at the accuracy of the solver itself.
const DUHAMEL_FLOOR: f64 = 1e-9;

fn criterion_09_duhamel_residual() -> bool {
    let start = Instant::now();
    let p = medium(1.0, 1.0);
    let grid = SpaceGrid::with_spacing(-10.0, 10.0, 1.0 / 128.0).unwrap();
    let f = gaussian(grid);
    let g = SampledField::from_fn(grid, |x| x * (-x * x).exp());
    let mut residuals = Vec::new();
    for (slabs, panels) in [(2, 16), (4, 32), (8, 64), (16, 128), (32, 256)] {
        let r = duhamel_residual(&f, &g, 1.0, &p, &DuhamelConfig { slabs, panels }).unwrap();
        residuals.push(r);
    }
    let at_32 = *residuals.last().unwrap();
    let monotone = residuals
        .windows(2)
        .all(|w| w[1] <= 0.5 * w[0] || w[1] < DUHAMEL_FLOOR);
    let (fast, rt) = within_runtime(start, Duration::from_secs(120));
    let ok = at_32 < 1e-4 && monotone && fast;
    let trail: Vec<String> = residuals.iter().map(|r| format!("{r:.1e}")).collect();
    verdict(
        9,
        "Duhamel fixed-point residual",
        ok,
        format!("residuals {} (32 slabs tol 1e-4, halving until floor {DUHAMEL_FLOOR:.0e}), {rt}", trail.join(" > "))
    )
}

fn criterion_10_decay_envelope() -> bool {
    let times = [0.5, 1.0, 2.0, 4.0];
    let grid = SpaceGrid::with_spacing(-14.0, 14.0, 1.0 / 64.0).unwrap();
    let state = StatePair::new(gaussian(grid), SampledField::zeros(grid)).unwrap();
    let mut all_ok = true;
    let mut details = Vec::new();
    for k in [1.0, 2.0] {
        let rows = norm_report(&state, &medium(k, 1.0), &times).unwrap();
        let first = rows[0].ratios();
        let mut growth = [0.0f64; 3];
        for row in &rows {
            for (g, (r, r0)) in growth.iter_mut().zip(row.ratios().iter().zip(first)) {
                *g = g.max(r / r0);
            }
        }
        let ok = growth.iter().all(|g| *g <= 10.0);
        all_ok &= ok;
        details.push(format!(
            "k={k}: max growth u {:.2}, u_t {:.2}, u_x {:.2}",
            growth[0], growth[1], growth[2]
        ));
    }
    verdict(
        10,
        "decay envelope (ratios <= 10x first sample)",
        all_ok,
        details.join("; ")
    )
}

fn main() {
    let criteria: [fn() -> bool; 10] = [
        criterion_01_bessel_accuracy,
        criterion_02_kernel_point_values,
        criterion_03_dalembert_reduction,
        criterion_04_fd_cross_oracle,
        criterion_05_mass_conservation,
        criterion_06_monte_carlo_lattice_limit,
        criterion_07_semigroup_law,
        criterion_08_time_reversal,
        criterion_09_duhamel_residual,
        criterion_10_decay_envelope,
    ];
    let mut failed = 0;
    for (i, run) in criteria.iter().enumerate() {
        match std::panic::catch_unwind(run) {
            Ok(true) => {}
            Ok(false) => failed += 1,
            Err(_) => {
                println!("[FAIL] criterion {}: panicked", i + 1);
                failed += 1;
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
