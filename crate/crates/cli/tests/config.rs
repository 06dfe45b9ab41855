use nsp_core::cauchy::SolverConfig;
use nsp_core::riemann::{hugoniot_connect, sound_speed, EndState};
use nsp_waves::config::ScenarioKind;
use nsp_waves::{parse_config_str, CliError, ExperimentConfig};

fn invalid_key(text: &str) -> (String, String) {
    match parse_config_str(text) {
        Err(CliError::Invalid { key, message }) => (key, message),
        other => panic!("expected a validation error, got {other:?}"),
    }
}

#[test]
fn minimal_shock_config_fills_defaults() {
    let cfg = parse_config_str("[shock]\nn_minus = 1.1\nu_minus = 0.0\ndelta = 0.1\n").unwrap();
    assert_eq!(cfg.scenario, ScenarioKind::Shock);
    assert_eq!(cfg.temperature, 1.0);
    assert_eq!(cfg.grid.cells, 64);
    assert_eq!(cfg.t_end(), 40.0);
    assert_eq!(cfg.perturbation.nu_minus, 1e-3);
    assert_eq!(cfg.perturbation.modes_minus.len(), 1);
    assert_eq!(cfg, ExperimentConfig::default());
}

#[test]
fn comments_and_mode_lists_parse() {
    let text = r#"
# far-field data
scenario = "rarefaction"
[rarefaction]
delta = 0.2   # strength
[perturbation]
modes_plus = [{ k = 2, amp_n = 1.0, amp_m = 0.0 }, { k = 3, amp_n = 0.0, amp_m = 1.0, phase_m = 0.5 }]
"#;
    let cfg = parse_config_str(text).unwrap();
    assert_eq!(cfg.scenario, ScenarioKind::Rarefaction);
    assert_eq!(cfg.t_end(), 100.0);
    assert_eq!(cfg.perturbation.modes_plus[1].k, 3);
    assert_eq!(cfg.perturbation.modes_plus[1].phase_m, 0.5);
}

#[test]
fn oversized_perturbation_is_rejected_by_the_smallness_condition() {
    let (key, message) = invalid_key("[shock]\ndelta = 0.1\n[perturbation]\nnu_plus = 0.02\n");
    assert_eq!(key, "perturbation.nu_plus");
    assert!(message.contains("smallness"), "{message}");
    let (key, _) = invalid_key("[smallness]\ngamma0 = 0.001\n");
    assert_eq!(key, "perturbation.nu_minus");
}

#[test]
fn unknown_keys_and_type_mismatches_are_rejected() {
    let err = parse_config_str("[shock]\ndleta = 0.1\n").unwrap_err();
    assert!(matches!(err, CliError::Parse(_)));
    assert!(err.to_string().contains("dleta"), "{err}");
    assert!(matches!(parse_config_str("temperature = \"hot\"\n"), Err(CliError::Parse(_))));
    assert!(matches!(parse_config_str("[grid]\ncells = 1.5\n"), Err(CliError::Parse(_))));
}

#[test]
fn constraint_violations_name_the_key() {
    assert_eq!(invalid_key("temperature = -1.0\n").0, "temperature");
    assert_eq!(invalid_key("[shock]\ndelta = 2.0\n").0, "shock.delta");
    assert_eq!(invalid_key("[shock]\ndensity_bump = 0.2\n").0, "shock.density_bump");
    assert_eq!(invalid_key("[solver]\noutput_interval = 0.3\n").0, "solver.output_interval");
    assert_eq!(invalid_key("[grid]\ncells = 4\n").0, "grid.cells");
    assert_eq!(invalid_key("[perturbation]\nmodes_minus = [{ k = 0, amp_n = 1.0, amp_m = 0.0 }]\n").0, "perturbation.modes_minus");
}

#[test]
fn incommensurate_point_count_suggests_a_fix() {
    let (key, message) = invalid_key("[grid]\nhalf_width = 100.0\nn_points = 2000\n");
    assert_eq!(key, "grid.n_points");
    let suggested: usize = message.rsplit("n_points = ").next().unwrap().trim().parse().unwrap();
    let cfg = parse_config_str(&format!("[grid]\nhalf_width = 100.0\nn_points = {suggested}\n")).unwrap();
    let g = cfg.cell_setup().line_grid(-100.0, 100.0).unwrap();
    assert_eq!(g.n_points(), suggested);
    assert!((g.spacing() - cfg.spacing()).abs() < 1e-15);
}

#[test]
fn refinement_scales_cells_and_profile_spacing() {
    let cfg = ExperimentConfig::default().refined(2).unwrap();
    assert_eq!(cfg.grid.cells, 128);
    assert_eq!(cfg.grid.profile_spacing, 0.025);
    assert!(ExperimentConfig::default().refined(0).is_err());
}

#[test]
fn automatic_extent_satisfies_the_horizon_rule() {
    let cfg = ExperimentConfig::default();
    let (lo, hi) = cfg.line_extent().unwrap();
    assert_eq!(lo, -hi);
    let g = cfg.cell_setup().line_grid(lo, hi).unwrap();
    assert!(g.n_points() <= 4096, "{}", g.n_points());
    let sc: SolverConfig = cfg.solver_config();
    let conn = hugoniot_connect(&EndState::new(1.1, 0.0).unwrap(), 1.0, 1.0).unwrap();
    let st = conn.speed * cfg.t_end();
    let vmax = conn.left.u_bar.abs().max(conn.right.u_bar.abs()) + sound_speed(1.0);
    let report = sc.horizon(&g, (st.min(0.0) - sc.window_half_width, st.max(0.0) + sc.window_half_width), vmax);
    assert!(report.satisfied, "{report:?}");

    let mut r = cfg.clone();
    r.scenario = ScenarioKind::Rarefaction;
    let (lo, hi) = r.line_extent().unwrap();
    assert!(lo < -200.0 && hi > 300.0, "{lo} {hi}");
}
