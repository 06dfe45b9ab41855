use nsp_core::profile::{
    compute_profile, fit_profile_decay, profile_rhs, traveling_wave_residual, uniqueness_defect,
    verify_profile_structure, ProfileOptions, ProfilePoint,
};
use nsp_core::riemann::{hugoniot_connect, EndState, ShockConnection};

fn default_conn() -> ShockConnection {
    hugoniot_connect(&EndState::new(1.1, 0.0).unwrap(), 1.0, 1.0).unwrap()
}

#[test]
fn default_profile_structure() {
    let p = compute_profile(&default_conn(), &ProfileOptions::default()).unwrap();
    let rep = verify_profile_structure(&p);
    assert!(rep.ok(), "{:?}", rep.violations);
    assert!(rep.dn_negative && rep.dphi_positive && !rep.dphi_negative_as_printed);
    assert!(rep.identity_defect < 1e-6);
    assert!(rep.mass_flux_defect < 1e-12);
    assert!(rep.momentum_decomposition_defect < 1e-10);
    assert!(rep.quasineutral_tail_defect < 1e-9);
    assert!(rep.comparison_constant.is_finite() && rep.comparison_constant > 1.0);
    assert!((rep.sigma_at_zero - 0.5).abs() < 1e-12);
}

#[test]
fn midpoint_density_slope_is_negative() {
    let c = default_conn();
    let p = compute_profile(&c, &ProfileOptions::default()).unwrap();
    let s = p.sample(0.0);
    let d = profile_rhs(&ProfilePoint { n: s.jet.n, phi: s.jet.phi, psi: s.jet.dphi }, &c).unwrap();
    assert!(d.n < 0.0);
}

#[test]
fn residual_is_second_order() {
    let c = default_conn();
    let coarse = compute_profile(&c, &ProfileOptions { spacing: 0.1, ..Default::default() }).unwrap();
    let fine = compute_profile(&c, &ProfileOptions { spacing: 0.05, ..Default::default() }).unwrap();
    let rc = traveling_wave_residual(&coarse).unwrap();
    let rf = traveling_wave_residual(&fine).unwrap();
    let ratio = rc.max() / rf.max();
    assert!((3.5..4.5).contains(&ratio), "ratio {ratio} ({rc:?} / {rf:?})");
}

#[test]
fn tails_are_log_linear_and_scale_with_strength() {
    let c = default_conn();
    let p = compute_profile(&c, &ProfileOptions::default()).unwrap();
    let d = fit_profile_decay(&p).unwrap();
    assert!(d.min_r_squared() >= 0.999, "{d:?}");
    let half = hugoniot_connect(&EndState::new(1.05, 0.0).unwrap(), 1.0, 1.0).unwrap();
    let q = compute_profile(&half, &ProfileOptions::default()).unwrap();
    let e = fit_profile_decay(&q).unwrap();
    let ratio = d.n_left.rate / e.n_left.rate;
    assert!((ratio - 2.0).abs() <= 0.5, "left rate ratio {ratio}");
    let ratio = d.n_right.rate / e.n_right.rate;
    assert!((ratio - 2.0).abs() <= 0.5, "right rate ratio {ratio}");
}

#[test]
fn steepest_point_is_at_the_anchor() {
    let p = compute_profile(&default_conn(), &ProfileOptions::default()).unwrap();
    let dn = p.dn_s.values();
    let (imax, _) = dn.iter().enumerate().fold((0, 0.0), |(bi, bv), (i, v)| if v.abs() > bv { (i, v.abs()) } else { (bi, bv) });
    assert!(p.xi_grid.point(imax).abs() < 2.0);
}

#[test]
fn independent_solves_agree() {
    let d = uniqueness_defect(&default_conn(), &ProfileOptions::default()).unwrap();
    assert!(d < 1e-6, "{d}");
}

#[test]
fn boosted_connection_gives_the_same_density() {
    let c = default_conn();
    let p = compute_profile(&c, &ProfileOptions::default()).unwrap();
    let q = compute_profile(&c.boosted(0.7), &ProfileOptions::default()).unwrap();
    let d = p.n_s.values().iter().zip(q.n_s.values()).fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()));
    assert!(d < 1e-12, "{d}");
    assert!((q.speed() - p.speed() - 0.7).abs() < 1e-14);
}

#[test]
fn comparison_constant_is_grid_stable() {
    let c = default_conn();
    let a = verify_profile_structure(&compute_profile(&c, &ProfileOptions { spacing: 0.1, ..Default::default() }).unwrap());
    let b = verify_profile_structure(&compute_profile(&c, &ProfileOptions { spacing: 0.05, ..Default::default() }).unwrap());
    let rel = (a.comparison_constant - b.comparison_constant).abs() / b.comparison_constant;
    assert!(rel < 0.1, "{} vs {}", a.comparison_constant, b.comparison_constant);
}

#[test]
fn degenerate_strength_rejected() {
    let c = hugoniot_connect(&EndState::new(1.0 + 1e-8, 0.0).unwrap(), 1.0, 1.0).unwrap();
    assert!(compute_profile(&c, &ProfileOptions::default()).is_err());
}
