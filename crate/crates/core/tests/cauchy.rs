use std::sync::OnceLock;

use nsp_core::cauchy::*;
use nsp_core::numerics::{BoundaryKind, Grid1D, SpatialField};
use nsp_core::scenario::*;
use nsp_core::shifts::{time_integral, zero_mass_residual, MassLedger};

fn shock_config(half_width: f64, perturbed: bool) -> ShockScenarioConfig {
    let mut cfg = ShockScenarioConfig::default();
    cfg.cells.cells = 64;
    cfg.cells.t_end = 20.0;
    cfg.half_width = half_width;
    if !perturbed {
        cfg.minus = SideSpec::zero();
        cfg.plus = SideSpec::zero();
    }
    cfg
}

fn perturbed() -> &'static ShockScenario {
    static S: OnceLock<ShockScenario> = OnceLock::new();
    S.get_or_init(|| ShockScenario::build(&shock_config(120.0, true)).unwrap())
}

fn short_run(t_end: f64) -> SolverConfig {
    SolverConfig { t_end, ..SolverConfig::default() }
}

fn perturbed_run() -> &'static CauchyRun {
    static R: OnceLock<CauchyRun> = OnceLock::new();
    R.get_or_init(|| run_shock(perturbed(), &short_run(20.0)).unwrap())
}

#[test]
fn constant_state_is_an_equilibrium() {
    let g = Grid1D::new(-10.0, 10.0, 201).unwrap();
    let (n, m) = (1.2, 0.3);
    let nf = SpatialField::from_fn(g, BoundaryKind::Line, |_| n).unwrap();
    let mf = SpatialField::from_fn(g, BoundaryKind::Line, |_| m).unwrap();
    let phi = -n.ln();
    let mut s = CauchyState::new(0.0, nf, mf, (phi, phi), 1e-13).unwrap();
    let bc = BoundaryData::constant(n, m, phi);
    let dt = s.stable_dt(1.0, 0.4, 0.25);
    for _ in 0..1000 {
        s = ssp_step(&s, dt, 1.0, &bc, &bc, 1e-13).unwrap().0;
    }
    for i in 0..g.n_points() {
        assert!((s.n.values()[i] - n).abs() < 1e-13);
        assert!((s.m.values()[i] - m).abs() < 1e-13);
        assert!((s.phi.values()[i] - phi).abs() < 1e-13);
    }
}

#[test]
fn interior_change_equals_boundary_inflow() {
    let sc = perturbed();
    let s0 = init_shock(sc, 1e-12).unwrap();
    let a = s0.n.values();
    let last = a.len() - 1;
    let bc = BoundaryData {
        left: [a[0] * 1.01, s0.m.values()[0] + 0.01, s0.phi.values()[0]],
        right: [a[last] * 0.99, s0.m.values()[last] - 0.02, s0.phi.values()[last]],
    };
    let dt = s0.stable_dt(1.0, 0.4, 0.25);
    let mut s = s0.clone();
    let mut inflow = StepFluxes::default();
    for _ in 0..50 {
        let (next, f) = ssp_step(&s, dt, 1.0, &bc, &bc, 1e-12).unwrap();
        inflow.mass += f.mass;
        inflow.momentum += f.momentum;
        s = next;
    }
    let (n0, m0) = s0.interior_totals();
    let (n1, m1) = s.interior_totals();
    assert!((n1 - n0 - inflow.mass).abs() < 1e-11 * n0.abs());
    assert!((m1 - m0 - inflow.momentum).abs() < 1e-11 * n0.abs());
    assert!(inflow.mass.abs() > 1e-6);
}

#[test]
fn unperturbed_initial_state_is_the_profile() {
    let sc = ShockScenario::build(&shock_config(120.0, false)).unwrap();
    let s = init_shock(&sc, 1e-12).unwrap();
    for (i, x) in s.grid.points().into_iter().enumerate() {
        let q = sc.profile.sample(x).jet;
        assert_eq!(s.n.values()[i], q.n);
        assert!((s.m.values()[i] - q.m).abs() < 1e-12);
    }
    assert!(s.poisson_residual() < 1e-8);
}

fn unperturbed_drift(cells: usize) -> (f64, Vec<(f64, f64)>) {
    let mut cfg = shock_config(100.0, false);
    cfg.cells.cells = cells;
    cfg.cells.t_end = 10.0;
    let sc = ShockScenario::build(&cfg).unwrap();
    let run = run_shock(&sc, &short_run(10.0)).unwrap();
    (sc.grid.spacing(), run.series.records.iter().map(|r| (r.t, r.dist_linf)).collect())
}

#[test]
fn unperturbed_run_drifts_at_second_order() {
    let (h, coarse) = unperturbed_drift(64);
    let (_, fine) = unperturbed_drift(128);
    for &(t, d) in &coarse {
        assert!(d <= 1e-4 * h * h * (1.0 + t), "t {t}: drift {d:e}");
    }
    let ratio = coarse.last().unwrap().1 / fine.last().unwrap().1;
    assert!(ratio > 3.0 && ratio < 5.0, "refinement ratio {ratio}");
}

#[test]
fn zero_mass_data_has_vanishing_antiderivatives() {
    let mut cfg = shock_config(200.0, true);
    cfg.density_bump = 0.05;
    let sc = &ShockScenario::build(&cfg).unwrap();
    let a = sc.ansatz(0).unwrap();
    let phi = sc.n0.linear_combination(1.0, &a.n_sharp, -1.0).unwrap().cumulative();
    let psi = sc.m0.linear_combination(1.0, &a.m_sharp, -1.0).unwrap().cumulative();
    let last = phi.values().len() - 1;
    assert!(phi.values()[last].abs() < 1e-8, "{}", phi.values()[last]);
    assert!(psi.values()[last].abs() < 1e-8, "{}", psi.values()[last]);
    assert!(phi.linf() > 1e-6);
}

#[test]
fn ledger_round_trips_through_the_built_state() {
    let sc = perturbed();
    let s = init_shock(sc, 1e-12).unwrap();
    let ledger = MassLedger::from_line_data(&s.n, &s.m, &sc.profile, &sc.minus.spec, &sc.plus.spec).unwrap();
    let c = &sc.correction.ledger;
    assert!((ledger.int_n_left - c.int_n_left).abs() < 1e-8);
    assert!((ledger.int_n_right - c.int_n_right).abs() < 1e-8);
    assert!((ledger.int_m_left - c.int_m_left).abs() < 1e-8);
    assert!((ledger.int_m_right - c.int_m_right).abs() < 1e-8);
    let ti = time_integral(&sc.minus, &sc.plus).unwrap().value;
    let r = zero_mass_residual(&ledger, &sc.minus.spec, &sc.plus.spec, sc.profile.speed(), ti);
    assert!(r.abs() < 1e-10);
}

#[test]
fn perturbed_shock_settles_onto_the_shifted_profile() {
    let run = perturbed_run();
    let (peak, last, ratio) = run.series.post_transient_reduction(1.0).unwrap();
    assert!(ratio >= 10.0, "peak {peak:e} final {last:e}");
    let h = perturbed().grid.spacing();
    let x_inf = perturbed().correction.asymptotic.x_inf;
    let shift = run.series.last().unwrap().shift_obs.unwrap();
    assert!((shift - x_inf).abs() <= 2.0 * h, "{shift} vs {x_inf}");
    assert!(run.series.antiderivative_constant(perturbed().nu) <= 100.0);
}

#[test]
fn run_keeps_the_potential_consistent_and_conserves() {
    let run = perturbed_run();
    let times = run.series.times();
    assert!(times.windows(2).all(|w| w[1] > w[0]));
    for r in &run.series.records {
        assert!(r.poisson_residual < 1e-8);
        assert!(r.dist_linf.is_finite() && r.h1_pert_norm.is_finite());
    }
    let (n0, m0) = run.initial_totals;
    let (n1, m1) = run.final_state.interior_totals();
    assert!((n1 - n0 - run.inflow.mass).abs() < 1e-9);
    assert!((m1 - m0 - run.inflow.momentum).abs() < 1e-9);
}

#[test]
fn doubling_the_line_leaves_the_diagnostics_unchanged() {
    let wide = ShockScenario::build(&shock_config(240.0, true)).unwrap();
    let run = run_shock(&wide, &short_run(20.0)).unwrap();
    let gap = perturbed_run().series.max_distance_gap(&run.series).unwrap();
    assert!(gap < 1e-6, "gap {gap:e}");
}

#[test]
fn short_lines_are_rejected() {
    let sc = ShockScenario::build(&shock_config(60.0, true)).unwrap();
    assert!(run_shock(&sc, &short_run(20.0)).is_err());
    let bad = SolverConfig { output_interval: 0.3, ..short_run(1.0) };
    assert!(run_shock(&sc, &bad).is_err());
}

#[test]
fn rarefaction_run_starts_on_the_ansatz_and_approaches_the_fan() {
    let cfg = RarefactionScenarioConfig {
        cells: CellSetup { cells: 64, t_end: 10.0, ..CellSetup::default() },
        x_min: -80.0,
        x_max: 90.0,
        ..RarefactionScenarioConfig::default()
    };
    let sc = RarefactionScenario::build(&cfg).unwrap();
    let s0 = init_rarefaction(&sc, 1e-12).unwrap();
    let a = sc.ansatz(0).unwrap();
    assert_eq!(s0.n.values(), a.n_sharp.values());
    let run = run_rarefaction(&sc, &short_run(10.0)).unwrap();
    let d = run.series.distances();
    assert!(d[d.len() - 1] < d[2]);
    assert!(run.series.records.iter().all(|r| r.shift_obs.is_none()));
}
