use std::f64::consts::PI;

use nsp_core::numerics::{BoundaryKind, Grid1D, SpatialField};
use nsp_core::periodic::{
    cell_grid, evolve_periodic, fit_alpha, poisson_boltzmann_solve, EvolveOptions, PeriodicCell, PerturbationSpec,
    PoissonBoundary,
};
use nsp_core::riemann::EndState;
use nsp_core::Error;

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0_f64, |m, (x, y)| m.max((x - y).abs()))
}

#[test]
fn constant_density_gives_quasineutral_potential() {
    let g = cell_grid(2.0 * PI, 64).unwrap();
    let n = SpatialField::from_fn(g, BoundaryKind::Periodic, |_| 1.3).unwrap();
    let phi = poisson_boltzmann_solve(&n, PoissonBoundary::Periodic, 1e-12).unwrap();
    assert!(phi.values().iter().all(|p| *p == -(1.3_f64).ln()));
}

#[test]
fn small_mode_matches_linearized_fourier() {
    let a = 1e-6;
    for k in [1.0, 2.0, 3.0] {
        let g = cell_grid(2.0 * PI, 256).unwrap();
        let n = SpatialField::from_fn(g, BoundaryKind::Periodic, |x| 1.0 + a * (k * x).cos()).unwrap();
        let phi = poisson_boltzmann_solve(&n, PoissonBoundary::Periodic, 1e-14).unwrap();
        let exact: Vec<f64> = g.points().iter().map(|x| -a * (k * x).cos() / (k * k + 1.0)).collect();
        assert!(max_diff(phi.values(), &exact) < 1e-9, "k={k}");
    }
}

fn manufactured_error(points: usize) -> f64 {
    let g = Grid1D::new(-5.0, 5.0, points).unwrap();
    let phi_star = |x: f64| -0.2 * (-x * x).exp();
    let rhs = |x: f64| {
        let e = (-x * x).exp();
        -0.2 * (4.0 * x * x - 2.0) * e + (-phi_star(x)).exp()
    };
    let n = SpatialField::from_fn(g, BoundaryKind::Line, rhs).unwrap();
    let bc = PoissonBoundary::Dirichlet { left: phi_star(-5.0), right: phi_star(5.0) };
    let phi = poisson_boltzmann_solve(&n, bc, 1e-12).unwrap();
    let exact: Vec<f64> = g.points().into_iter().map(phi_star).collect();
    max_diff(phi.values(), &exact)
}

#[test]
fn manufactured_solution_is_second_order() {
    let e1 = manufactured_error(101);
    let e2 = manufactured_error(201);
    assert!(e1 < 1e-3);
    let ratio = e1 / e2;
    assert!((3.5..4.5).contains(&ratio), "{e1} {e2}");
}

#[test]
fn nonpositive_density_rejected() {
    let g = cell_grid(1.0, 16).unwrap();
    let n = SpatialField::from_fn(g, BoundaryKind::Periodic, |x| x - 0.5).unwrap();
    assert!(poisson_boltzmann_solve(&n, PoissonBoundary::Periodic, 1e-12).is_err());
}

#[test]
fn zero_perturbation_stays_constant() {
    let base = EndState::new(1.0, 0.3).unwrap();
    let spec = PerturbationSpec::zero(2.0 * PI).unwrap();
    let opts = EvolveOptions { n_cells: 64, ..Default::default() };
    assert!(matches!(evolve_periodic(base, &spec, 1.0, 2.0, 1.0, &opts), Err(Error::CflViolation { .. })));
    let dt = PeriodicCell::new(base, &spec, 1.0, 64).unwrap().stable_dt();
    let hist = evolve_periodic(base, &spec, 1.0, 2.0, dt, &opts).unwrap();
    for s in &hist.snapshots {
        assert!(s.n.iter().all(|v| (v - 1.0).abs() < 1e-14));
        assert!(s.m.iter().all(|v| (v - 0.3).abs() < 1e-14));
        assert!(s.phi.iter().all(|v| v.abs() < 1e-14));
    }
    assert!(hist.fitted_alpha.is_none());
    assert!(fit_alpha(&hist).is_err());
}

fn run(nu: f64, k: u32, cells: usize, t_end: f64) -> nsp_core::periodic::PeriodicHistory {
    let base = EndState::new(1.0, 0.0).unwrap();
    let spec = PerturbationSpec::single(2.0 * PI, k, 1.0, 0.5).unwrap().scaled_to_nu(nu, cells).unwrap();
    let dt = PeriodicCell::new(base, &spec, 1.0, cells).unwrap().stable_dt();
    evolve_periodic(base, &spec, 1.0, t_end, dt, &EvolveOptions { n_cells: cells, ..Default::default() }).unwrap()
}

#[test]
fn averages_are_conserved_and_potential_consistent() {
    let h = run(1e-3, 1, 128, 20.0);
    let (dn, dm) = h.average_drift();
    assert!(dn <= 1e-12 && dm <= 1e-12, "{dn} {dm}");
    assert!(h.max_poisson_residual() <= 1e-8);
    let [n, _, _] = h.fields(h.snapshots.len() - 1).unwrap();
    assert_eq!(n.values()[0], *n.values().last().unwrap());
}

#[test]
fn decay_rate_is_amplitude_independent() {
    let a = run(1e-3, 1, 128, 40.0);
    let b = run(1e-4, 1, 128, 40.0);
    let fa = a.fitted_alpha.unwrap();
    let fb = b.fitted_alpha.unwrap();
    assert!(fa.r_squared >= 0.99 && fa.envelope_constant <= 10.0, "{fa:?}");
    assert!((fa.alpha - fb.alpha).abs() <= 0.1 * fa.alpha, "{fa:?} {fb:?}");
    assert!((fa.alpha - 0.5).abs() < 0.05, "{fa:?}");
    assert!(a.max_norm_growth() <= 1.05, "{}", a.max_norm_growth());
}

#[test]
fn higher_modes_decay_faster() {
    let a = run(1e-3, 1, 128, 20.0).fitted_alpha.unwrap();
    let b = run(1e-3, 2, 128, 20.0).fitted_alpha.unwrap();
    assert!(b.alpha >= a.alpha, "{a:?} {b:?}");
}

#[test]
fn refinement_changes_final_norm_at_second_order() {
    let c = run(1e-3, 1, 64, 5.0);
    let m = run(1e-3, 1, 128, 5.0);
    let f = run(1e-3, 1, 256, 5.0);
    let last = |h: &nsp_core::periodic::PeriodicHistory| *h.h1.last().unwrap();
    let ratio = (last(&c) - last(&m)).abs() / (last(&m) - last(&f)).abs();
    assert!((3.0..5.0).contains(&ratio), "{ratio}");
}
