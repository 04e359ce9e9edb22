use telegraph_core::grid::{SampledField, SpaceGrid};
use telegraph_core::kernel::MediumParams;
use telegraph_core::oracles::{
    binomial_sigma, duhamel_residual, fd_solve, prw_simulate, DuhamelConfig, FDConfig, FirstStep, WalkConfig,
};
use telegraph_core::semigroup::{gamma_with_probe, StatePair};
use telegraph_core::solver::solve_u;

fn medium(k: f64, c: f64) -> MediumParams {
    MediumParams::new(k, c).unwrap()
}

fn gaussian(grid: SpaceGrid) -> SampledField {
    SampledField::from_fn(grid, |x| (-x * x).exp())
}

#[test]
fn fd_matches_dalembert() {
    let dx = 1.0 / 512.0;
    let g = SpaceGrid::with_spacing(-8.0, 8.0, dx).unwrap();
    let p = medium(0.0, 1.0);
    let cfg = FDConfig::for_final_time(1.0, dx, &p, 0.9).unwrap();
    let fd = fd_solve(&gaussian(g), &SampledField::zeros(g), 1.0, &p, &cfg).unwrap();
    let exact = SampledField::from_fn(g, |x| 0.5 * ((-(x + 1.0) * (x + 1.0)).exp() + (-(x - 1.0) * (x - 1.0)).exp()));
    assert!(fd.rel_l2_error(&exact).unwrap() < 1e-4);
}

#[test]
fn fd_with_initial_velocity_converges() {
    let p = medium(1.0, 1.0);
    let err = |dx: f64| {
        let g = SpaceGrid::with_spacing(-8.0, 8.0, dx).unwrap();
        let f = gaussian(g);
        let v = SampledField::from_fn(g, |x| x * (-x * x).exp());
        let cfg = FDConfig::for_final_time(1.0, dx, &p, 0.9).unwrap();
        let fd = fd_solve(&f, &v, 1.0, &p, &cfg).unwrap();
        fd.rel_l2_error(&solve_u(&f, &v, 1.0, &p).unwrap().field).unwrap()
    };
    let ratio = err(1.0 / 128.0) / err(1.0 / 256.0);
    assert!((3.5..=4.5).contains(&ratio), "ratio {ratio}");
}

#[test]
fn no_second_solution_on_contraction_window() {
    // difference of two independent solvers over [0, 2/k] stays inside their
    // combined error estimates
    let k = 1.0;
    let p = medium(k, 1.0);
    let dx = 1.0 / 256.0;
    let g = SpaceGrid::with_spacing(-8.0, 8.0, dx).unwrap();
    let fine_g = g.refined();
    let (f, v) = (gaussian(g), SampledField::zeros(g));
    let (ff, fv) = (gaussian(fine_g), SampledField::zeros(fine_g));
    for t in [0.5, 1.0, 1.5, 2.0 / k] {
        let conv = solve_u(&f, &v, t, &p).unwrap();
        let coarse = fd_solve(&f, &v, t, &p, &FDConfig::for_final_time(t, dx, &p, 0.9).unwrap()).unwrap();
        let fine = fd_solve(&ff, &fv, t, &p, &FDConfig::for_final_time(t, dx / 2.0, &p, 0.9).unwrap()).unwrap();
        let mut fd_bound = 0.0f64;
        let mut diff = 0.0f64;
        for (i, (&a, &b)) in coarse.values().iter().zip(conv.field.values()).enumerate() {
            fd_bound = fd_bound.max(4.0 / 3.0 * (a - fine.values()[2 * i]).abs());
            diff = diff.max((a - b).abs());
        }
        let budget = 1.5 * (fd_bound + conv.error_estimate);
        assert!(diff <= budget, "t={t}: diff {diff:e} > budget {budget:e}");
    }
}

#[test]
fn never_flip_fraction_up_start() {
    let p = medium(1.0, 1.0);
    let cfg = WalkConfig::from_continuum(&p, 1e-3, 1.0, 100_000, 5, FirstStep::Up).unwrap();
    let h = prw_simulate(&cfg).unwrap();
    assert_eq!(h.never_flipped_down, 0);
    let expected = cfg.p.powi(cfg.n_steps as i32);
    let sigma = binomial_sigma(expected, cfg.n_walkers);
    assert!((h.never_flipped_fraction() - expected).abs() <= 3.0 * sigma);
    assert!((expected - (-0.5f64).exp()).abs() < 1e-3);
}

#[test]
fn never_flip_statistic_over_seeds() {
    let p = medium(1.0, 1.0);
    let mut hits = 0;
    for seed in 0..20 {
        let cfg = WalkConfig::from_continuum(&p, 1e-3, 1.0, 100_000, 1000 + seed, FirstStep::Up).unwrap();
        let h = prw_simulate(&cfg).unwrap();
        let q = cfg.never_flip_probability();
        if (h.never_flipped_fraction() - q).abs() <= 3.0 * binomial_sigma(q, cfg.n_walkers) {
            hits += 1;
        }
    }
    assert!(hits >= 18, "{hits}/20 within 3 sigma");
}

#[test]
fn duhamel_undamped_identity() {
    let g = SpaceGrid::with_spacing(-6.0, 6.0, 1.0 / 128.0).unwrap();
    let v = SampledField::from_fn(g, |x| x * (-x * x).exp());
    let r = duhamel_residual(&gaussian(g), &v, 1.0, &medium(0.0, 1.0), &DuhamelConfig::default()).unwrap();
    assert!(r < 1e-8, "{r:e}");
}

#[test]
fn duhamel_damped_with_32_slabs() {
    let g = SpaceGrid::with_spacing(-6.0, 6.0, 1.0 / 128.0).unwrap();
    let cfg = DuhamelConfig { slabs: 32, panels: 256 };
    let r = duhamel_residual(&gaussian(g), &SampledField::zeros(g), 1.0, &medium(1.0, 1.0), &cfg).unwrap();
    assert!(r < 1e-4, "{r:e}");
}

#[test]
fn semigroup_composition_pairs() {
    let p = medium(1.0, 1.0);
    let g = SpaceGrid::with_spacing(-10.0, 10.0, 1.0 / 256.0).unwrap();
    let u = SampledField::from_fn(g, |x| (-x * x).exp() + 0.5 * (-(x - 1.0) * (x - 1.0) * 2.0).exp());
    let ut = SampledField::from_fn(g, |x| 0.3 * x * (-x * x).exp());
    let state = StatePair::new(u, ut).unwrap();
    for (t, s) in [(0.5, 0.5), (1.0, 1.0), (0.3, 0.7)] {
        let direct = gamma_with_probe(t + s, &state, &p, 1e-3).unwrap().state;
        let inner = gamma_with_probe(s, &state, &p, 1e-3).unwrap().state;
        let composed = gamma_with_probe(t, &inner, &p, 1e-3).unwrap().state;
        let shrink = p.c() * (t + s);
        let err = composed
            .rel_l2_error_on(&direct, g.x0() + shrink, g.x_end() - shrink)
            .unwrap();
        assert!(err < 1e-5, "({t},{s}): {err:e}");
    }
}
