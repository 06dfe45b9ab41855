use std::sync::OnceLock;

use nsp_core::ansatz::*;
use nsp_core::numerics::{BoundaryKind, Grid1D, SpatialField};
use nsp_core::periodic::{CellState, CellView, PeriodicCell, PerturbationSpec};
use nsp_core::profile::{compute_profile, ProfileOptions, ShockProfile};
use nsp_core::riemann::{hugoniot_connect, EndState, RarefactionEndpoints};
use nsp_core::scenario::*;
use proptest::prelude::*;

fn ends() -> RarefactionEndpoints {
    RarefactionEndpoints::from_strength(EndState::new(1.0, 0.0).unwrap(), 0.2, 1.0).unwrap()
}

fn w0(e: &RarefactionEndpoints, eps: f64, xi: f64) -> f64 {
    let (wl, wr) = e.w_bounds();
    0.5 * (wl + wr) + 0.5 * (wr - wl) * (eps * xi).tanh()
}

#[test]
fn burgers_at_time_zero_is_initial_data() {
    let e = ends();
    for x in [-30.0, -1.0, 0.0, 0.3, 7.0, 50.0] {
        assert_eq!(burgers_smooth(x, 0.0, &e, 0.1).unwrap(), w0(&e, 0.1, x));
    }
}

#[test]
fn burgers_with_equal_states_is_constant() {
    let l = EndState::new(1.0, 0.2).unwrap();
    let e = RarefactionEndpoints::new(l, l, 1.0).unwrap();
    let c = e.w_bounds().0;
    for (x, t) in [(-5.0, 0.0), (0.0, 3.0), (12.0, 40.0)] {
        assert_eq!(burgers_smooth(x, t, &e, 0.1).unwrap(), c);
    }
}

#[test]
fn burgers_matches_forward_characteristics() {
    let e = ends();
    for eps in [0.1, 1.0] {
        let d = 1e-3;
        let seeds: Vec<f64> = (0..=400_000).map(|i| -200.0 + i as f64 * d).collect();
        for t in [0.5, 5.0, 50.0] {
            let pushed: Vec<(f64, f64)> = seeds.iter().map(|xi| (xi + t * w0(&e, eps, *xi), w0(&e, eps, *xi))).collect();
            for k in 0..=40 {
                let x = -40.0 + 3.0 * k as f64;
                let j = pushed.partition_point(|p| p.0 <= x);
                let (a, b) = (pushed[j - 1], pushed[j]);
                let oracle = a.1 + (b.1 - a.1) * (x - a.0) / (b.0 - a.0);
                let w = burgers_smooth(x, t, &e, eps).unwrap();
                assert!((w - oracle).abs() < 1e-8, "eps {eps} t {t} x {x}: {w} vs {oracle}");
            }
        }
    }
}

#[test]
fn sharper_smoothing_approaches_the_fan() {
    let e = ends();
    let (wl, wr) = e.w_bounds();
    let t = 10.0;
    let probes = [wl - 0.05, wl + 0.25 * (wr - wl), 0.5 * (wl + wr), wl + 0.75 * (wr - wl), wr + 0.05];
    let err = |eps: f64| -> f64 {
        probes
            .iter()
            .map(|xi| {
                let exact = xi.clamp(wl, wr);
                (burgers_smooth(xi * t, t, &e, eps).unwrap() - exact).abs()
            })
            .fold(0.0, f64::max)
    };
    let errs = [err(1.0), err(10.0), err(100.0)];
    assert!(errs[1] < errs[0] && errs[2] < errs[1], "{errs:?}");
    assert!(errs[2] < 1e-3, "{errs:?}");
}

#[test]
fn smoothed_rarefaction_far_left_is_left_state() {
    let e = ends();
    let s = approx_rarefaction(-500.0, 3.0, &e, 0.1).unwrap();
    assert!((s.n - e.left.n_bar).abs() < 1e-12);
    assert!((s.u - e.left.u_bar).abs() < 1e-12);
    assert!((s.phi - e.left.phi_bar).abs() < 1e-12);
}

#[test]
fn derivative_norms_follow_the_envelope() {
    let sm = SmoothRarefaction::new(ends(), 0.1).unwrap();
    let grid = Grid1D::new(-150.0, 350.0, 10_001).unwrap();
    let times = [1.0, 2.0, 5.0, 10.0, 20.0, 50.0, 100.0];
    let c = sm.derivative_envelope(&grid, &times).unwrap();
    for (p, v) in ["1", "2", "inf"].iter().zip(c) {
        assert!(v <= 10.0, "C_{p} = {v}");
    }
}

#[test]
fn distance_to_fan_shrinks_late() {
    let sm = SmoothRarefaction::new(ends(), 0.1).unwrap();
    let grid = Grid1D::new(-300.0, 2000.0, 23_001).unwrap();
    let d2 = sm.fan_distance(&grid, 100.0).unwrap();
    let d3 = sm.fan_distance(&grid, 1000.0).unwrap();
    assert!(d3 < d2, "{d3} vs {d2}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn smoothed_rarefaction_is_monotone(x in -300.0f64..300.0, dx in 1e-3f64..20.0, t in 0.0f64..100.0) {
        let e = ends();
        let a = approx_rarefaction(x, t, &e, 0.1).unwrap();
        let b = approx_rarefaction(x + dx, t, &e, 0.1).unwrap();
        prop_assert!(b.u >= a.u && b.n >= a.n);
        prop_assert!(a.u_x > 0.0 && a.n_x > 0.0);
        prop_assert!((a.phi + a.n.ln()).abs() < 1e-15);
    }

    #[test]
    fn burgers_solves_the_characteristic_equation(x in -200.0f64..200.0, t in 0.0f64..200.0, eps in 0.01f64..2.0) {
        let e = ends();
        let j = burgers_jet(x, t, &e, eps).unwrap();
        prop_assert!((j.foot + t * j.w - x).abs() < 1e-10 * x.abs().max(1.0));
        prop_assert!((j.w - w0(&e, eps, j.foot)).abs() < 1e-15);
    }
}

fn profile() -> &'static ShockProfile {
    static P: OnceLock<ShockProfile> = OnceLock::new();
    P.get_or_init(|| {
        let c = hugoniot_connect(&EndState::new(1.1, 0.0).unwrap(), 1.0, 1.0).unwrap();
        compute_profile(&c, &ProfileOptions::default()).unwrap()
    })
}

fn zero_cell(base: EndState, t: f64) -> (PeriodicCell, CellState) {
    let cell = PeriodicCell::new(base, &PerturbationSpec::zero(2.0 * std::f64::consts::PI).unwrap(), 1.0, 128).unwrap();
    let z = vec![0.0; 128];
    let st = CellState::from_deviation(t, &base, z.clone(), z.clone(), z);
    (cell, st)
}

fn view<'a>(cell: &PeriodicCell, st: &'a CellState) -> CellView<'a> {
    CellView { base: cell.base, temperature: cell.temperature, h: cell.h, state: st }
}

fn line(h: f64, half: usize) -> Grid1D {
    Grid1D::with_spacing(-(half as f64) * h, h, 2 * half + 1).unwrap()
}

#[test]
fn unperturbed_shock_ansatz_is_the_travelling_profile() {
    let p = profile();
    let t = 3.0;
    let (cm, sm) = zero_cell(p.connection.left, t);
    let (cp, sp) = zero_cell(p.connection.right, t);
    let g = line(cm.h, 2048);
    let a = build_shock_ansatz(&g, p, &view(&cm, &sm), &view(&cp, &sp), 0.0, 0.0).unwrap();
    for (i, x) in g.points().into_iter().enumerate() {
        let q = p.sample(x - p.speed() * t);
        assert_eq!(a.n_sharp.values()[i], q.jet.n);
        assert_eq!(a.m_sharp.values()[i], q.jet.m);
        assert_eq!(a.phi_sharp.values()[i], q.jet.phi);
    }
}

#[test]
fn unperturbed_shock_residuals_vanish() {
    let p = profile();
    let t = 2.0;
    let (cm, sm) = zero_cell(p.connection.left, t);
    let (cp, sp) = zero_cell(p.connection.right, t);
    let g = line(cm.h, 2048);
    let e = shock_error_terms(&g, p, &view(&cm, &sm), &view(&cp, &sp), ShiftSample::fixed(0.0, 0.0)).unwrap();
    for (k, f) in e.terms.iter().enumerate() {
        assert!(f.linf() < 1e-8, "h{} = {:e}", k + 1, f.linf());
    }
}

/// Centred-difference residual of the travelling profile on a line of the given spacing.
fn differenced_profile_residual(h: f64, half: usize) -> [f64; 3] {
    let p = profile();
    let (dt, t) = (1e-3, 2.0);
    let g = line(h, half);
    let (cm, _) = zero_cell(p.connection.left, t);
    let (cp, _) = zero_cell(p.connection.right, t);
    let snaps: Vec<AnsatzFields> = [t - dt, t, t + dt]
        .iter()
        .map(|&s| {
            let (_, sm) = zero_cell(p.connection.left, s);
            let (_, sp) = zero_cell(p.connection.right, s);
            let vm = CellView { base: cm.base, temperature: 1.0, h, state: &sm };
            let vp = CellView { base: cp.base, temperature: 1.0, h, state: &sp };
            build_shock_ansatz(&g, p, &vm, &vp, 0.0, 0.0).unwrap()
        })
        .collect();
    let e = residual_error_terms(&snaps[0], &snaps[1], &snaps[2], 1.0).unwrap();
    [e.norms.l2[0], e.norms.l2[1], e.norms.l2[2]]
}

#[test]
fn differenced_profile_residual_is_second_order() {
    let coarse = differenced_profile_residual(0.2, 500);
    let fine = differenced_profile_residual(0.1, 1000);
    for k in 0..3 {
        let ratio = coarse[k] / fine[k];
        assert!(ratio > 3.0 && ratio < 5.0, "h{}: {} -> {} (ratio {ratio})", k + 1, coarse[k], fine[k]);
    }
}

fn shock() -> &'static ShockScenario {
    static S: OnceLock<ShockScenario> = OnceLock::new();
    S.get_or_init(|| ShockScenario::build(&ShockScenarioConfig::default()).unwrap())
}

#[test]
fn shock_ansatz_telescopes_to_blended_far_fields() {
    let s = shock();
    let k = 20;
    let a = s.ansatz(k).unwrap();
    let t = s.times()[k];
    let (x, _) = s.trajectory.at(t);
    let lm = s.minus.view(k).extend(&s.grid);
    let lp = s.plus.view(k).extend(&s.grid);
    let (bm, bp) = (s.connection.left, s.connection.right);
    for (i, pt) in s.grid.points().into_iter().enumerate() {
        let g = s.profile.sample(pt - s.profile.speed() * t - x).sigma;
        let tele = (bm.n_bar + lm.rho[i]) * (1.0 - g) + (bp.n_bar + lp.rho[i]) * g;
        assert!((a.n_sharp.values()[i] - tele).abs() < 1e-12, "x {pt}");
    }
}

#[test]
fn shock_ansatz_matches_far_fields() {
    let s = shock();
    let k = 40;
    let t = s.times()[k];
    let (x, y) = s.trajectory.at(t);
    let a = s.ansatz(k).unwrap();
    let lm = s.minus.view(k).extend(&s.grid);
    let lp = s.plus.view(k).extend(&s.grid);
    let (bm, bp) = (s.connection.left, s.connection.right);
    let sp = s.profile.speed();
    let mut checked = 0;
    for (i, pt) in s.grid.points().into_iter().enumerate() {
        let gx = s.profile.sample(pt - sp * t - x).sigma;
        let gy = s.profile.sample(pt - sp * t - y).sigma;
        if gx.max(gy) < 1e-9 {
            assert!((a.n_sharp.values()[i] - bm.n_bar - lm.rho[i]).abs() < 1e-8, "x {pt}");
            assert!((a.m_sharp.values()[i] - bm.m_bar - lm.w[i]).abs() < 1e-8, "x {pt}");
            checked += 1;
        }
        if gx.min(gy) > 1.0 - 1e-9 {
            assert!((a.n_sharp.values()[i] - bp.n_bar - lp.rho[i]).abs() < 1e-8, "x {pt}");
            assert!((a.m_sharp.values()[i] - bp.m_bar - lp.w[i]).abs() < 1e-8, "x {pt}");
            checked += 1;
        }
    }
    assert!(checked > s.grid.n_points() / 5, "{checked}");
}

#[test]
fn shock_potential_is_not_the_blend_of_far_potentials() {
    let s = shock();
    let k = 0;
    let a = s.ansatz(k).unwrap();
    let st_m = &s.minus.snapshots[k];
    let st_p = &s.plus.snapshots[k];
    let h = s.minus.h();
    let (x, _) = s.trajectory.at(0.0);
    let mut gap = 0.0_f64;
    for (i, pt) in s.grid.points().into_iter().enumerate() {
        let g = s.profile.sample(pt - x).sigma;
        let blend = CellState::interpolate(&st_m.phi, h, pt).0 * (1.0 - g) + CellState::interpolate(&st_p.phi, h, pt).0 * g;
        gap = gap.max((a.phi_sharp.values()[i] - blend).abs());
    }
    assert!(gap > 1e-4, "{gap}");
}

#[test]
fn residuals_agree_with_centred_differencing() {
    let s = shock();
    let k = 20;
    let dt = (s.times()[k] - s.times()[k - 1]) / 100.0;
    let mut cells = [s.minus.cell().clone(), s.plus.cell().clone()];
    cells[0].state = s.minus.snapshots[k - 1].clone();
    cells[1].state = s.plus.snapshots[k - 1].clone();
    let mut states = Vec::new();
    for step in 1..=101 {
        for c in cells.iter_mut() {
            c.step(dt).unwrap();
        }
        if step >= 99 {
            states.push([cells[0].state.clone(), cells[1].state.clone()]);
        }
    }
    let snaps: Vec<AnsatzFields> = states
        .iter()
        .map(|st| {
            let (x, y) = s.trajectory.at(st[0].t);
            build_shock_ansatz(&s.grid, &s.profile, &view(&cells[0], &st[0]), &view(&cells[1], &st[1]), x, y).unwrap()
        })
        .collect();
    let diff = residual_error_terms(&snaps[0], &snaps[1], &snaps[2], s.config.temperature).unwrap();
    let mid = &states[1];
    let semi = shock_error_terms(&s.grid, &s.profile, &view(&cells[0], &mid[0]), &view(&cells[1], &mid[1]), s.shifts(k).unwrap()).unwrap();
    for c in 0..3 {
        let d = semi.terms[c].linear_combination(1.0, &diff.terms[c], -1.0).unwrap();
        let rel = d.l2() / semi.terms[c].l2();
        assert!(rel < 0.02, "h{}: relative gap {rel}", c + 1);
    }
}

#[test]
fn derivative_part_of_mass_residual_has_zero_mass() {
    let s = shock();
    for k in [0, 100, 400] {
        let t = s.times()[k];
        let (x, y) = s.trajectory.at(t);
        let lm = s.minus.view(k).extend(&s.grid);
        let lp = s.plus.view(k).extend(&s.grid);
        let sp = s.profile.speed();
        let f: Vec<f64> = s
            .grid
            .points()
            .into_iter()
            .enumerate()
            .map(|(i, pt)| {
                let px = s.profile.sample(pt - sp * t - x);
                let py = s.profile.sample(pt - sp * t - y);
                let (jw, jwx) = (lp.w[i] - lm.w[i], lp.w_x[i] - lm.w_x[i]);
                (py.dsigma - px.dsigma) * jw + (py.sigma - px.sigma) * jwx
            })
            .collect();
        let f = SpatialField::new(s.grid, f, BoundaryKind::Line).unwrap();
        let scale = f.lp(1.0).max(1e-300);
        assert!(f.integral().abs() <= 1e-6 * scale + 1e-15, "t {t}: {} vs {scale}", f.integral());
    }
}

#[test]
fn shock_residual_envelopes() {
    let s = shock();
    let alpha = s.alpha.unwrap();
    let d = s.strength();
    let (mut ch, mut ca) = (0.0_f64, 0.0_f64);
    for k in (20..s.times().len()).step_by(20) {
        let t = s.times()[k];
        let e = s.error_terms(k).unwrap();
        ch = ch.max(e.norms.combined_h2() * (alpha * t).exp() / (s.nu * d.sqrt()));
        ca = ca.max(e.norms.combined_anti_l2() * (alpha * t).exp() / (s.nu / d.sqrt()));
    }
    assert!(ch <= 10.0, "H2 envelope constant {ch}");
    assert!(ca <= 10.0, "antiderivative envelope constant {ca}");
}

#[test]
fn unperturbed_remainders_vanish() {
    let p = profile();
    let (cm, sm) = zero_cell(p.connection.left, 1.0);
    let (cp, sp) = zero_cell(p.connection.right, 1.0);
    let g = line(cm.h, 1024);
    let r = catalogue_remainders(&g, p, &view(&cm, &sm), &view(&cp, &sp), ShiftSample::fixed(0.3, 0.3)).unwrap();
    for (name, f) in r.fields() {
        assert!(f.linf() == 0.0, "{name}: {:e}", f.linf());
    }
}

#[test]
fn remainder_catalogue_decays() {
    let s = shock();
    let samples: Vec<RemainderSample> = (0..s.times().len()).step_by(20).map(|k| s.remainders(k).unwrap()).collect();
    let identity_sup = samples.iter().map(|r| r.identity.linf()).fold(0.0, f64::max);
    assert!(identity_sup < 1e-14, "{identity_sup:e}");
    let report = remainder_decay_checks(&samples, s.alpha.unwrap(), 1.0).unwrap();
    assert!(report.passed(), "{report:#?}");
}

fn rarefaction() -> &'static RarefactionScenario {
    static R: OnceLock<RarefactionScenario> = OnceLock::new();
    R.get_or_init(|| {
        let cfg = RarefactionScenarioConfig {
            cells: CellSetup { cells: 64, t_end: 40.0, ..CellSetup::default() },
            ..RarefactionScenarioConfig::default()
        };
        RarefactionScenario::build(&cfg).unwrap()
    })
}

#[test]
fn unperturbed_rarefaction_ansatz_is_the_smoothed_wave() {
    let e = ends();
    let sm = SmoothRarefaction::new(e, 0.1).unwrap();
    let (cm, stm) = zero_cell(e.left, 5.0);
    let (cp, stp) = zero_cell(e.right, 5.0);
    let g = line(cm.h, 1024);
    let a = build_rarefaction_ansatz(&g, &sm, &view(&cm, &stm), &view(&cp, &stp)).unwrap();
    for (i, x) in g.points().into_iter().enumerate() {
        let r = sm.sample(x, 5.0).unwrap();
        assert_eq!(a.n_sharp.values()[i], r.n);
        assert_eq!(a.u_sharp.values()[i], r.u);
        assert_eq!(a.phi_sharp.values()[i], r.phi);
    }
}

#[test]
fn rarefaction_weights_are_monotone_fractions() {
    let r = rarefaction();
    let t = 7.0;
    let mut last = (0.0, 0.0);
    for x in r.grid.points() {
        let s = r.smooth.sample(x, t).unwrap();
        let (g, h) = r.smooth.weights(&s);
        assert!((0.0..=1.0).contains(&g) && (0.0..=1.0).contains(&h), "x {x}: {g} {h}");
        assert!(g >= last.0 && h >= last.1);
        last = (g, h);
    }
}

#[test]
fn rarefaction_ansatz_matches_far_fields() {
    let r = rarefaction();
    let k = 100;
    let a = r.ansatz(k).unwrap();
    let lm = r.minus.view(k).extend(&r.grid);
    let lp = r.plus.view(k).extend(&r.grid);
    let e = &r.smooth.endpoints;
    for (i, x) in r.grid.points().into_iter().enumerate() {
        if x < -120.0 {
            assert!((a.n_sharp.values()[i] - e.left.n_bar - lm.rho[i]).abs() < 1e-8, "x {x}");
            assert!((a.u_sharp.values()[i] - e.left.u_bar - lm.v[i]).abs() < 1e-8, "x {x}");
        }
        if x > 320.0 {
            assert!((a.n_sharp.values()[i] - e.right.n_bar - lp.rho[i]).abs() < 1e-8, "x {x}");
            assert!((a.u_sharp.values()[i] - e.right.u_bar - lp.v[i]).abs() < 1e-8, "x {x}");
        }
    }
}

#[test]
fn rarefaction_residuals_decay() {
    let r = rarefaction();
    let alpha = r.alpha.unwrap();
    let samples: Vec<(f64, [f64; 3])> = (20..r.times().len())
        .step_by(20)
        .map(|k| (r.times()[k], r.error_terms(k).unwrap().norms.l2))
        .collect();
    for c in 0..3 {
        let t: Vec<f64> = samples.iter().map(|s| s.0).collect();
        let y: Vec<f64> = samples.iter().map(|s| s.1[c]).collect();
        let fit = nsp_core::numerics::fit_exponential_decay(&t, &y).unwrap();
        assert!(fit.rate >= 0.5 * alpha, "k{}: rate {} vs alpha {alpha}", c + 1, fit.rate);
    }
}
