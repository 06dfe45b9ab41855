use std::fs;
use std::path::Path;

use nsp_waves::{parse_config_str, run_command, Command};

fn summary_value(dir: &Path, key: &str) -> String {
    let text = fs::read_to_string(dir.join("summary.txt")).unwrap();
    text.lines()
        .find_map(|l| l.strip_prefix(&format!("{key} = ")))
        .unwrap_or_else(|| panic!("{key} missing from summary"))
        .to_string()
}

#[test]
fn profile_command_is_deterministic() {
    let cfg = parse_config_str("[shock]\nn_minus = 1.1\ndelta = 0.1\n").unwrap();
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let ra = run_command(Command::Profile, &cfg, a.path()).unwrap();
    let rb = run_command(Command::Profile, &cfg, b.path()).unwrap();
    assert!(ra.passed && rb.passed);
    assert_eq!(summary_value(&ra.dir, "all_passed"), "true");
    for name in ["profile.csv", "profile_n.dat", "profile.svg", "summary.txt"] {
        let x = fs::read(ra.dir.join(name)).unwrap();
        let y = fs::read(rb.dir.join(name)).unwrap();
        assert!(!x.is_empty());
        assert_eq!(x, y, "{name} differs between runs");
    }
    let csv = fs::read_to_string(ra.dir.join("profile.csv")).unwrap();
    assert!(csv.starts_with("xi,n_s,m_s,u_s,phi_s,dn_s,du_s,dphi_s\n"));
}

#[test]
fn periodic_command_reports_decay() {
    let cfg = parse_config_str("[solver]\nt_end = 20.0\n").unwrap();
    let dir = tempfile::tempdir().unwrap();
    let out = run_command(Command::Periodic, &cfg, dir.path()).unwrap();
    assert!(out.passed);
    let alpha: f64 = summary_value(&out.dir, "minus.alpha").parse().unwrap();
    assert!(alpha > 0.3 && alpha < 0.7, "{alpha}");
    for f in ["periodic_minus.csv", "periodic_plus_final.csv", "periodic_minus_h1.dat", "periodic_h1.svg"] {
        assert!(out.dir.join(f).exists(), "{f}");
    }
}

#[test]
fn unperturbed_shock_simulation_stays_at_the_floor() {
    let text = "[perturbation]\nnu_minus = 0.0\nnu_plus = 0.0\n[grid]\nhalf_width = 100.0\n[solver]\nt_end = 5.0\n";
    let cfg = parse_config_str(text).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let out = run_command(Command::SimulateShock, &cfg, dir.path()).unwrap();
    assert!(out.passed);
    assert_eq!(summary_value(&out.dir, "distance_over_floor.pass"), "true");
    let diag = fs::read_to_string(out.dir.join("diagnostics.csv")).unwrap();
    assert_eq!(diag.lines().next().unwrap(), "t,dist_linf,shift_obs,h1_pert_norm,phi_l2,anti_phi,anti_psi,mass_total,momentum_total");
    assert_eq!(diag.lines().count(), 1 + 11);
    let state = fs::read_to_string(out.dir.join("state_final.csv")).unwrap();
    assert_eq!(state.lines().next().unwrap(), "x,n,m,u,phi");
}

#[test]
fn too_short_line_is_a_pipeline_error() {
    let cfg = parse_config_str("[perturbation]\nnu_minus = 0.0\nnu_plus = 0.0\n[grid]\nhalf_width = 30.0\n[solver]\nt_end = 5.0\n").unwrap();
    let dir = tempfile::tempdir().unwrap();
    let err = run_command(Command::SimulateShock, &cfg, dir.path()).unwrap_err();
    assert!(err.to_string().starts_with("shock run:"), "{err}");
}

#[test]
fn large_initial_antiderivatives_are_rejected() {
    let text = "[shock]\ndensity_bump = 0.05\n[perturbation]\nnu_minus = 0.0\nnu_plus = 0.0\n[grid]\nhalf_width = 100.0\n[solver]\nt_end = 5.0\n[smallness]\nepsilon0 = 0.01\n";
    let cfg = parse_config_str(text).unwrap();
    let dir = tempfile::tempdir().unwrap();
    match run_command(Command::SimulateShock, &cfg, dir.path()) {
        Err(nsp_waves::CliError::Invalid { key, .. }) => assert_eq!(key, "smallness.epsilon0"),
        other => panic!("{other:?}"),
    }
}
