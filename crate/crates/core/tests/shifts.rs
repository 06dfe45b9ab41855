use std::f64::consts::PI;
use std::sync::OnceLock;

use nsp_core::numerics::{BoundaryKind, Grid1D, SpatialField};
use nsp_core::periodic::{evolve_periodic, EvolveOptions, Mode, PeriodicCell, PeriodicHistory, PerturbationSpec};
use nsp_core::profile::{compute_profile, ProfileOptions, ShockProfile};
use nsp_core::riemann::{hugoniot_connect, EndState};
use nsp_core::shifts::*;

const CELLS: usize = 128;

struct Setup {
    profile: ShockProfile,
    minus: PeriodicHistory,
    plus: PeriodicHistory,
    zero_minus: PeriodicHistory,
    zero_plus: PeriodicHistory,
}

fn history(base: EndState, spec: &PerturbationSpec, t_end: f64) -> PeriodicHistory {
    let dt = PeriodicCell::new(base, spec, 1.0, CELLS).unwrap().stable_dt();
    evolve_periodic(base, spec, 1.0, t_end, dt, &EvolveOptions { n_cells: CELLS, ..Default::default() }).unwrap()
}

fn specs() -> (PerturbationSpec, PerturbationSpec) {
    let m = PerturbationSpec::new(2.0 * PI, vec![Mode { k: 1, amp_n: 1.0, amp_m: 0.4, phase_n: 0.3, phase_m: 1.1 }])
        .unwrap()
        .scaled_to_nu(1e-3, CELLS)
        .unwrap();
    let p = PerturbationSpec::new(2.0 * PI, vec![Mode { k: 1, amp_n: 0.7, amp_m: -0.5, phase_n: -0.8, phase_m: 0.2 }])
        .unwrap()
        .scaled_to_nu(1e-3, CELLS)
        .unwrap();
    (m, p)
}

fn setup() -> &'static Setup {
    static S: OnceLock<Setup> = OnceLock::new();
    S.get_or_init(|| {
        let c = hugoniot_connect(&EndState::new(1.1, 0.0).unwrap(), 1.0, 1.0).unwrap();
        let profile = compute_profile(&c, &ProfileOptions::default()).unwrap();
        let (m, p) = specs();
        let zero = PerturbationSpec::zero(2.0 * PI).unwrap();
        Setup {
            minus: history(c.left, &m, 40.0),
            plus: history(c.right, &p, 40.0),
            zero_minus: history(c.left, &zero, 2.0),
            zero_plus: history(c.right, &zero, 2.0),
            profile,
        }
    })
}

#[test]
fn zero_perturbation_has_stationary_shifts() {
    let s = setup();
    for t in [0.0, 0.5, 1.7] {
        let (xp, yp) = shift_rhs(t, &ShiftState { t, x: 0.3, y: -0.2 }, &s.zero_minus, &s.zero_plus, &s.profile).unwrap();
        assert!(xp.abs() <= 1e-12 && yp.abs() <= 1e-12, "{xp:e} {yp:e}");
    }
    let zero = &s.zero_minus.spec;
    let (x0, y0) = initial_shifts(&MassLedger::default(), zero, zero, &s.profile).unwrap();
    assert_eq!((x0, y0), (0.0, 0.0));
    let tr = integrate_shifts(0.25, -0.1, &s.zero_minus, &s.zero_plus, &s.profile, 2.0).unwrap();
    assert!(tr.states.iter().all(|st| (st.x - 0.25).abs() < 1e-12 && (st.y + 0.1).abs() < 1e-12));
}

#[test]
fn localized_mass_gives_classical_shift() {
    let s = setup();
    let zero = &s.zero_minus.spec;
    let (x0, y0) = initial_shifts(&MassLedger::localized(0.03, -0.02), zero, zero, &s.profile).unwrap();
    let c = &s.profile.connection;
    assert!((x0 + 0.03 / c.jump_n()).abs() < 1e-14);
    assert!((y0 + (-0.02) / c.jump_m()).abs() < 1e-14);
}

#[test]
fn newton_root_matches_scan() {
    let s = setup();
    let (m, p) = specs();
    let ledger = MassLedger::localized(0.05, 0.01);
    let (x0, y0) = initial_shifts(&ledger, &m, &p, &s.profile).unwrap();
    let c = &s.profile.connection;
    let xs = scan_root(|x| density_functional(&s.profile, &m, &p, x).0, -ledger.n_total() / c.jump_n(), -5.0, 5.0, 1e-4).unwrap();
    let ys = scan_root(|y| momentum_functional(&s.profile, &m, &p, y).0, -ledger.m_total() / c.jump_m(), -5.0, 5.0, 1e-4).unwrap();
    assert!((x0 - xs).abs() <= 1e-4 && (y0 - ys).abs() <= 1e-4, "{x0} {xs} {y0} {ys}");
}

#[test]
fn ode_limit_matches_closed_form() {
    let s = setup();
    let (m, p) = specs();
    let ledger = MassLedger::localized(0.05, 0.01);
    let (x0, y0) = initial_shifts(&ledger, &m, &p, &s.profile).unwrap();
    let tr = integrate_shifts(x0, y0, &s.minus, &s.plus, &s.profile, 40.0).unwrap();
    let asy = asymptotic_shifts(x0, y0, &s.minus, &s.plus, &s.profile).unwrap();
    let end = tr.terminal();
    assert!((end.x - asy.x_inf).abs() <= 1e-3 * asy.x_inf.abs().max(1.0), "{end:?} {asy:?}");
    assert!((end.y - asy.y_inf).abs() <= 1e-3 * asy.y_inf.abs().max(1.0), "{end:?} {asy:?}");
    let last = tr.x_prime.len() - 1;
    assert!(tr.x_prime[last].abs() <= 1e-8 && tr.y_prime[last].abs() <= 1e-8);
    assert!(asy.time_integral.tail_bound < 1e-9);
}

#[test]
fn rk4_step_halving() {
    let s = setup();
    let a = integrate_shifts_with(0.0, 0.0, &s.minus, &s.plus, &s.profile, 8.0, &ShiftOptions { stride: 2, tail_tol: 1.0 }).unwrap();
    let b = integrate_shifts_with(0.0, 0.0, &s.minus, &s.plus, &s.profile, 8.0, &ShiftOptions { stride: 4, tail_tol: 1.0 }).unwrap();
    let d = (a.terminal().x - b.terminal().x).abs().max((a.terminal().y - b.terminal().y).abs());
    assert!(d < 1e-8, "{d:e}");
}

#[test]
fn one_sided_perturbation_matches_direct_quadrature() {
    let (_, p) = specs();
    let zero = PerturbationSpec::zero(2.0 * PI).unwrap();
    let (rr, _) = mean_antiderivative_jumps(&zero, &p);
    let period = p.period;
    let n = 2000;
    let h = period / n as f64;
    let simpson = |f: &dyn Fn(f64) -> f64, b: f64, n: usize| -> f64 {
        let h = b / n as f64;
        let mut s = f(0.0) + f(b);
        for i in 1..n {
            s += if i % 2 == 1 { 4.0 } else { 2.0 } * f(i as f64 * h);
        }
        s * h / 3.0
    };
    let inner = |x: f64| simpson(&|y| p.rho(y), x, 200);
    let direct = (0..=n).map(|i| {
        let w = if i == 0 || i == n { 1.0 } else if i % 2 == 1 { 4.0 } else { 2.0 };
        w * inner(i as f64 * h)
    });
    let direct = direct.sum::<f64>() * h / 3.0 / period;
    assert!((rr - direct).abs() < 1e-10, "{rr} {direct}");
}

fn line_data(profile: &ShockProfile, minus: &PerturbationSpec, plus: &PerturbationSpec, shift: f64, bump_n: f64) -> (SpatialField, SpatialField) {
    let g = Grid1D::new(-250.0, 250.0, 10001).unwrap();
    let n0 = SpatialField::from_fn(g, BoundaryKind::Line, |x| {
        let q = profile.sample(x - shift);
        q.jet.n + minus.rho(x - shift) * (1.0 - q.sigma) + plus.rho(x - shift) * q.sigma + bump_n * bump(x - 3.0)
    })
    .unwrap();
    let m0 = SpatialField::from_fn(g, BoundaryKind::Line, |x| {
        let q = profile.sample(x - shift);
        q.jet.m + minus.w(x - shift) * (1.0 - q.sigma) + plus.w(x - shift) * q.sigma
    })
    .unwrap();
    (n0, m0)
}

fn translated(spec: &PerturbationSpec, a: f64) -> PerturbationSpec {
    let modes = spec
        .modes
        .iter()
        .map(|m| {
            let k = 2.0 * PI * m.k as f64 / spec.period;
            Mode { phase_n: m.phase_n - k * a, phase_m: m.phase_m - k * a, ..*m }
        })
        .collect();
    PerturbationSpec::new(spec.period, modes).unwrap()
}

#[test]
fn translation_moves_initial_shifts() {
    let s = setup();
    let (m, p) = specs();
    let a = 1.3;
    let (n0, m0) = line_data(&s.profile, &m, &p, a, 0.0);
    let (mt, pt) = (translated(&m, a), translated(&p, a));
    let ledger = MassLedger::from_line_data(&n0, &m0, &s.profile, &mt, &pt).unwrap();
    let (x0, y0) = initial_shifts(&ledger, &mt, &pt, &s.profile).unwrap();
    assert!((x0 - a).abs() < 1e-6 && (y0 - a).abs() < 1e-6, "{x0} {y0}");
}

#[test]
fn zero_mass_enforcement() {
    let s = setup();
    let (m, p) = specs();
    let (n0, m0) = line_data(&s.profile, &m, &p, 0.0, 0.02);
    let z = enforce_zero_mass(&n0, &m0, &s.profile, &s.minus, &s.plus).unwrap();
    assert!(z.residual_before.abs() > 1e-4);
    assert!(z.residual_after.abs() <= 1e-10, "{}", z.residual_after);
    assert!((z.asymptotic.x_inf - z.asymptotic.y_inf).abs() <= 1e-6, "{:?}", z.asymptotic);
    let again = enforce_zero_mass(&n0, &z.m0, &s.profile, &s.minus, &s.plus).unwrap();
    assert!(again.amplitude.abs() < 1e-12);
}

#[test]
fn oversized_bump_rejected() {
    let s = setup();
    let (m, p) = specs();
    let (n0, m0) = line_data(&s.profile, &m, &p, 0.0, 5.0);
    assert!(enforce_zero_mass(&n0, &m0, &s.profile, &s.minus, &s.plus).is_err());
}
