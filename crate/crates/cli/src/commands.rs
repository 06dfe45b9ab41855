//! Command pipelines. Each writes its artifacts and a `summary.txt` of
//! `key = value` lines into its own directory under the output root.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use nsp_core::cauchy::{run_rarefaction, run_shock, CauchyRun};
use nsp_core::export::{
    asymptotic_report, diagnostics_table, fmt_sig17, history_snapshot_table, history_summary_table, profile_table,
    residual_norms_table, shift_table, state_table, Table,
};
use nsp_core::numerics::combined_hk;
use nsp_core::periodic::PeriodicHistory;
use nsp_core::profile::{compute_profile, fit_profile_decay, traveling_wave_residual, verify_profile_structure};
use nsp_core::riemann::{hugoniot_connect, EndState, RarefactionEndpoints};
use nsp_core::scenario::{RarefactionScenario, ShockScenario};

use crate::config::{ExperimentConfig, ScenarioKind};
use crate::error::{CliError, CliResult, Context};
use crate::plot::{dat_text, svg_chart, ChartSpec, Curve};
use crate::verify::{suite_acceptable, Checks, Suite, CRITERIA};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Profile,
    Periodic,
    Shifts,
    SimulateShock,
    SimulateRarefaction,
    VerifyAll,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Profile => "profile",
            Command::Periodic => "periodic",
            Command::Shifts => "shifts",
            Command::SimulateShock => "simulate-shock",
            Command::SimulateRarefaction => "simulate-rarefaction",
            Command::VerifyAll => "verify-all",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CommandOutput {
    pub passed: bool,
    pub dir: PathBuf,
    pub files: Vec<PathBuf>,
}

struct Artifacts {
    dir: PathBuf,
    files: Vec<PathBuf>,
}

impl Artifacts {
    fn new(dir: PathBuf) -> CliResult<Self> {
        fs::create_dir_all(&dir).map_err(|source| CliError::Write { path: dir.clone(), source })?;
        Ok(Self { dir, files: Vec::new() })
    }

    fn write(&mut self, name: &str, text: &str) -> CliResult<()> {
        let path = self.dir.join(name);
        fs::write(&path, text).map_err(|source| CliError::Write { path: path.clone(), source })?;
        self.files.push(path);
        Ok(())
    }

    fn table(&mut self, name: &str, t: &Table) -> CliResult<()> {
        self.write(name, &t.to_csv())
    }

    fn curve(&mut self, stem: &str, curve: &Curve, x: &str, y: &str) -> CliResult<()> {
        self.write(&format!("{stem}.dat"), &dat_text(curve, x, y)?)
    }

    fn chart(&mut self, stem: &str, spec: &ChartSpec, curves: &[Curve]) -> CliResult<()> {
        self.write(&format!("{stem}.svg"), &svg_chart(spec, curves)?)
    }

    fn finish(mut self, command: Command, header: &str, checks: &Checks) -> CliResult<CommandOutput> {
        let passed = checks.all_passed();
        let mut s = format!("command = {}\n", command.name());
        s.push_str(header);
        s.push_str(&checks.lines(""));
        let _ = writeln!(s, "all_passed = {passed}");
        self.write("summary.txt", &s)?;
        Ok(CommandOutput { passed, dir: self.dir, files: self.files })
    }
}

fn chart(title: &str, x: &str, y: &str, log_y: bool) -> ChartSpec {
    ChartSpec { title: title.into(), x_label: x.into(), y_label: y.into(), log_y }
}

fn e(x: f64) -> String {
    format!("{x:.6e}")
}

/// Runs `command` and writes into `out/<command>`.
pub fn run_command(command: Command, cfg: &ExperimentConfig, out: &Path) -> CliResult<CommandOutput> {
    let art = Artifacts::new(out.join(command.name()))?;
    match command {
        Command::Profile => profile(cfg, art),
        Command::Periodic => periodic(cfg, art),
        Command::Shifts => shifts(cfg, art),
        Command::SimulateShock => simulate_shock(cfg, art),
        Command::SimulateRarefaction => simulate_rarefaction(cfg, art),
        Command::VerifyAll => verify_all(cfg, art),
    }
}

fn tolerances(cfg: &ExperimentConfig) -> String {
    let v = &cfg.solver;
    let mut s = String::new();
    let _ = writeln!(s, "temperature = {}", cfg.temperature);
    let _ = writeln!(s, "cells = {}", cfg.grid.cells);
    let _ = writeln!(s, "spacing = {}", fmt_sig17(cfg.spacing()));
    let _ = writeln!(s, "profile_spacing = {}", cfg.grid.profile_spacing);
    let _ = writeln!(s, "t_end = {}", cfg.t_end());
    let _ = writeln!(s, "cfl_hyperbolic = {}", v.cfl_hyperbolic);
    let _ = writeln!(s, "cfl_parabolic = {}", v.cfl_parabolic);
    let _ = writeln!(s, "poisson_tol = {:e}", v.poisson_tol);
    s
}

fn profile(cfg: &ExperimentConfig, mut art: Artifacts) -> CliResult<CommandOutput> {
    let s = &cfg.shock;
    let conn = hugoniot_connect(&EndState::new(s.n_minus, s.u_minus).context("end state")?, s.n_minus - s.delta, cfg.temperature)
        .context("hugoniot")?;
    let p = compute_profile(&conn, &cfg.profile_options()).context("profile")?;
    let t = profile_table(&p);
    art.table("profile.csv", &t)?;
    let xi = p.xi_grid.points();
    let n = Curve::new("n_s", &xi, p.n_s.values());
    let u = Curve::new("u_s", &xi, p.u_s.values());
    let phi = Curve::new("phi_s", &xi, p.phi_s.values());
    art.curve("profile_n", &n, "xi", "n_s")?;
    art.chart("profile", &chart("viscous shock profile", "xi", "value", false), &[n, u, phi])?;

    let rep = verify_profile_structure(&p);
    let fits = fit_profile_decay(&p).context("tail fits")?;
    let residual = traveling_wave_residual(&p).context("profile residual")?.max();
    let mut ck = Checks::default();
    ck.info("speed", fmt_sig17(conn.speed));
    ck.info("strength", fmt_sig17(conn.strength));
    ck.info("mass_flux", fmt_sig17(conn.mass_flux));
    ck.info("traveling_wave_residual", e(residual));
    ck.info("comparison_constant", e(rep.comparison_constant));
    ck.info("identity_defect", e(rep.identity_defect));
    ck.add("mass_flux_relative_defect", e(rep.mass_flux_defect), rep.mass_flux_defect <= 1e-6);
    ck.add("sigma_at_zero", fmt_sig17(rep.sigma_at_zero), (rep.sigma_at_zero - 0.5).abs() <= 1e-12);
    ck.add("min_sigma_increment", e(rep.min_sigma_increment_resolved), rep.min_sigma_increment_resolved > 0.0);
    ck.add("structure_violations", rep.violations.len(), rep.ok());
    ck.add("tail_fit_min_r_squared", e(fits.min_r_squared()), fits.min_r_squared() >= 0.999);
    art.finish(Command::Profile, &tolerances(cfg), &ck)
}

fn end_states(cfg: &ExperimentConfig) -> CliResult<(EndState, EndState)> {
    let a = cfg.temperature;
    match cfg.scenario {
        ScenarioKind::Shock => {
            let s = &cfg.shock;
            let c = hugoniot_connect(&EndState::new(s.n_minus, s.u_minus).context("end state")?, s.n_minus - s.delta, a)
                .context("hugoniot")?;
            Ok((c.left, c.right))
        }
        ScenarioKind::Rarefaction => {
            let r = &cfg.rarefaction;
            let ends = RarefactionEndpoints::from_strength(EndState::new(r.n_minus, r.u_minus).context("end state")?, r.delta, a)
                .context("rarefaction curve")?;
            Ok((ends.left, ends.right))
        }
    }
}

fn history_checks(ck: &mut Checks, side: &str, h: &PeriodicHistory) {
    let (dn, dm) = h.average_drift();
    ck.info(&format!("{side}.nu"), e(h.nu));
    ck.add(&format!("{side}.average_drift"), e(dn.max(dm)), dn.max(dm) <= 1e-12);
    ck.add(&format!("{side}.poisson_residual"), e(h.max_poisson_residual()), h.max_poisson_residual() <= 1e-8);
    if let Some(f) = h.fitted_alpha {
        ck.info(&format!("{side}.alpha"), fmt_sig17(f.alpha));
        ck.add(&format!("{side}.fit_r_squared"), e(f.r_squared), f.r_squared >= 0.99);
        ck.add(&format!("{side}.envelope_constant"), e(f.envelope_constant), f.envelope_constant <= 10.0);
    }
}

fn write_history(art: &mut Artifacts, side: &str, h: &PeriodicHistory) -> CliResult<Vec<Curve>> {
    art.table(&format!("periodic_{side}.csv"), &history_summary_table(h))?;
    art.table(&format!("periodic_{side}_final.csv"), &history_snapshot_table(h, h.snapshots.len() - 1))?;
    let norm = Curve::new(format!("H1 {side}"), &h.times, &h.h1);
    art.curve(&format!("periodic_{side}_h1"), &norm, "t", "h1")?;
    let mut curves = vec![norm];
    if let Some(f) = h.fitted_alpha {
        let y: Vec<f64> = h.times.iter().map(|t| f.prefactor * (-f.alpha * t).exp()).collect();
        curves.push(Curve::new(format!("fit {side} (alpha {:.4})", f.alpha), &h.times, &y));
    }
    Ok(curves)
}

fn periodic(cfg: &ExperimentConfig, mut art: Artifacts) -> CliResult<CommandOutput> {
    let (left, right) = end_states(cfg)?;
    let setup = cfg.cell_setup();
    let p = &cfg.perturbation;
    let mut ck = Checks::default();
    let mut curves = Vec::new();
    for (side, base, modes, nu) in [("minus", left, &p.modes_minus, p.nu_minus), ("plus", right, &p.modes_plus, p.nu_plus)] {
        let spec = nsp_core::scenario::SideSpec { modes: modes.iter().map(|m| (*m).into()).collect(), nu };
        let spec = spec.realize(setup.period, setup.cells).context("perturbation")?;
        let h = setup.history(base, &spec, cfg.temperature).context("periodic evolution")?;
        history_checks(&mut ck, side, &h);
        curves.extend(write_history(&mut art, side, &h)?);
    }
    if curves.iter().any(|c| c.points.iter().any(|p| p.1 > 0.0)) {
        art.chart("periodic_h1", &chart("periodic H1 norms", "t", "H1 norm", true), &curves)?;
    }
    art.finish(Command::Periodic, &tolerances(cfg), &ck)
}

fn shock_scenario(cfg: &ExperimentConfig) -> CliResult<ShockScenario> {
    let mut c = cfg.clone();
    c.scenario = ScenarioKind::Shock;
    c.validate()?;
    ShockScenario::build(&c.shock_scenario()?).context("shock scenario")
}

fn shifts(cfg: &ExperimentConfig, mut art: Artifacts) -> CliResult<CommandOutput> {
    let sc = shock_scenario(cfg)?;
    let z = &sc.correction;
    let tr = &sc.trajectory;
    art.table("shifts.csv", &shift_table(tr))?;
    art.write("asymptotic.txt", &asymptotic_report(z.x0, z.y0, &z.asymptotic))?;
    let t: Vec<f64> = tr.states.iter().map(|s| s.t).collect();
    let x: Vec<f64> = tr.states.iter().map(|s| s.x).collect();
    let y: Vec<f64> = tr.states.iter().map(|s| s.y).collect();
    let cx = Curve::new("X(t)", &t, &x);
    let cy = Curve::new("Y(t)", &t, &y);
    art.curve("shift_x", &cx, "t", "X")?;
    art.curve("shift_y", &cy, "t", "Y")?;
    let t1 = *t.last().unwrap_or(&0.0);
    let level = Curve::level("X_inf", z.asymptotic.x_inf, 0.0, t1);
    art.chart("shifts", &chart("shift curves", "t", "shift", false), &[cx, cy, level])?;

    let mut ck = Checks::default();
    let end = tr.terminal();
    let asy = &z.asymptotic;
    ck.info("X0", fmt_sig17(z.x0));
    ck.info("Y0", fmt_sig17(z.y0));
    ck.info("X_inf", fmt_sig17(asy.x_inf));
    ck.info("Y_inf", fmt_sig17(asy.y_inf));
    ck.info("bump_amplitude", fmt_sig17(z.amplitude));
    if let Some(a) = sc.alpha {
        ck.info("alpha", fmt_sig17(a));
    }
    ck.add("zero_mass_residual", e(z.residual_after), z.residual_after.abs() <= 1e-10);
    ck.add("shift_limit_gap", e((asy.x_inf - asy.y_inf).abs()), (asy.x_inf - asy.y_inf).abs() <= 1e-6);
    let dx = (end.x - asy.x_inf).abs() / asy.x_inf.abs().max(1.0);
    let dy = (end.y - asy.y_inf).abs() / asy.y_inf.abs().max(1.0);
    ck.add("terminal_X_mismatch", e(dx), dx <= 1e-3);
    ck.add("terminal_Y_mismatch", e(dy), dy <= 1e-3);
    art.finish(Command::Shifts, &tolerances(cfg), &ck)
}

fn write_run(art: &mut Artifacts, run: &CauchyRun, initial: Option<&Table>) -> CliResult<()> {
    art.table("diagnostics.csv", &diagnostics_table(&run.series))?;
    if let Some(t) = initial {
        art.table("state_initial.csv", t)?;
    }
    art.table("state_final.csv", &state_table(&run.final_state))?;
    let dist = Curve::new("sup distance", &run.series.times(), &run.series.distances());
    art.curve("distance", &dist, "t", "dist_linf")?;
    art.chart("distance", &chart("distance to the reference wave", "t", "sup distance", true), &[dist])?;
    Ok(())
}

fn run_checks(ck: &mut Checks, run: &CauchyRun) {
    ck.info("steps", run.steps);
    ck.info("dt", e(run.dt));
    ck.add("horizon_satisfied", run.horizon.satisfied, run.horizon.satisfied);
    let pr = run.series.records.iter().map(|r| r.poisson_residual).fold(0.0, f64::max);
    ck.add("poisson_residual", e(pr), pr <= 1e-8);
    let (n0, m0) = run.initial_totals;
    let (n1, m1) = run.final_state.interior_totals();
    let ledger = (n1 - n0 - run.inflow.mass).abs().max((m1 - m0 - run.inflow.momentum).abs());
    ck.add("conservation_defect", e(ledger), ledger <= 1e-9);
}

/// `H^2` size of the antiderivatives of the initial perturbation.
fn initial_antiderivative_size(sc: &ShockScenario, init: &nsp_core::cauchy::CauchyState) -> CliResult<f64> {
    let a = sc.ansatz(0).context("initial ansatz")?;
    let phi = init.n.linear_combination(1.0, &a.n_sharp, -1.0).context("perturbation")?.cumulative();
    let psi = init.m.linear_combination(1.0, &a.m_sharp, -1.0).context("perturbation")?.cumulative();
    combined_hk(&[&phi, &psi], 2).context("antiderivative norm")
}

fn simulate_shock(cfg: &ExperimentConfig, mut art: Artifacts) -> CliResult<CommandOutput> {
    let sc = shock_scenario(cfg)?;
    let solver = cfg.solver_config();
    let init = nsp_core::cauchy::init_shock(&sc, solver.poisson_tol).context("initial state")?;
    let size = initial_antiderivative_size(&sc, &init)?;
    if size > cfg.smallness.epsilon0 {
        return Err(CliError::invalid(
            "smallness.epsilon0",
            format!("initial antiderivatives have H^2 size {size:.3e}, above epsilon0 = {}", cfg.smallness.epsilon0),
        ));
    }
    let run = run_shock(&sc, &solver).context("shock run")?;
    write_run(&mut art, &run, Some(&state_table(&init)))?;
    let terms: Vec<_> = (0..sc.times().len())
        .step_by((cfg.solver.output_interval / cfg.solver.cell_output_interval).round().max(1.0) as usize)
        .map(|k| sc.error_terms(k))
        .collect::<nsp_core::Result<_>>()
        .context("ansatz residuals")?;
    art.table("residual_norms.csv", &residual_norms_table(&terms))?;

    let h = sc.grid.spacing();
    let mut ck = Checks::default();
    ck.info("n_points", sc.grid.n_points());
    ck.info("half_width", fmt_sig17(-sc.grid.x_min()));
    ck.info("X_inf", fmt_sig17(sc.correction.asymptotic.x_inf));
    ck.info("initial_antiderivative_h2", e(size));
    run_checks(&mut ck, &run);
    let perturbed = sc.nu > 0.0 || cfg.shock.density_bump != 0.0;
    if perturbed {
        let (peak, last, ratio) = run.series.post_transient_reduction(cfg.solver.transient).context("distance series")?;
        ck.info("peak_distance", e(peak));
        ck.info("final_distance", e(last));
        ck.add("distance_reduction", e(ratio), ratio >= 10.0);
        let shift = run.series.last().and_then(|r| r.shift_obs).unwrap_or(f64::NAN);
        let miss = (shift - sc.correction.asymptotic.x_inf).abs();
        ck.info("observed_shift", fmt_sig17(shift));
        ck.add("shift_miss_over_spacing", e(miss / h), miss <= 2.0 * h);
        ck.info("antiderivative_constant", e(run.series.antiderivative_constant(sc.nu)));
    } else {
        let excess = run.series.records.iter().map(|r| r.dist_linf / (1e-4 * h * h * (1.0 + r.t))).fold(0.0, f64::max);
        ck.add("distance_over_floor", e(excess), excess <= 1.0);
    }
    art.finish(Command::SimulateShock, &tolerances(cfg), &ck)
}

fn simulate_rarefaction(cfg: &ExperimentConfig, mut art: Artifacts) -> CliResult<CommandOutput> {
    let mut c = cfg.clone();
    c.scenario = ScenarioKind::Rarefaction;
    c.validate()?;
    let sc = RarefactionScenario::build(&c.rarefaction_scenario()?).context("rarefaction scenario")?;
    let solver = c.solver_config();
    let init = nsp_core::cauchy::init_rarefaction(&sc, solver.poisson_tol).context("initial state")?;
    let run = run_rarefaction(&sc, &solver).context("rarefaction run")?;
    write_run(&mut art, &run, Some(&state_table(&init)))?;

    let mut ck = Checks::default();
    ck.info("n_points", sc.grid.n_points());
    ck.info("x_min", fmt_sig17(sc.grid.x_min()));
    ck.info("x_max", fmt_sig17(sc.grid.x_max()));
    run_checks(&mut ck, &run);
    let d = run.series.distances();
    let t = run.series.times();
    let first = t.iter().position(|v| *v >= 10.0 - 1e-9).unwrap_or(0);
    let (early, late) = (d[first], d[d.len() - 1]);
    ck.info("distance_reference_time", fmt_sig17(t[first]));
    ck.info("distance_reference", e(early));
    ck.info("distance_final", e(late));
    ck.info("distance_ratio", e(late / early));
    ck.add("distance_decreases", e(late - early), late < early);
    let times: Vec<f64> = [1.0, 2.0, 5.0, 10.0, 20.0, 50.0, 100.0].into_iter().filter(|v| *v <= c.t_end()).collect();
    let env = sc.smooth.derivative_envelope(&sc.grid, &times).context("derivative envelope")?;
    for (p, v) in ["1", "2", "inf"].iter().zip(env) {
        ck.add(&format!("derivative_constant_p{p}"), e(v), v <= 10.0);
    }
    art.finish(Command::SimulateRarefaction, &tolerances(&c), &ck)
}

fn verify_all(cfg: &ExperimentConfig, mut art: Artifacts) -> CliResult<CommandOutput> {
    let mut suite = Suite::new(cfg);
    let outcomes = suite.run_all(|o| println!("{}", o.line()));
    let mut body = String::new();
    for o in &outcomes {
        body.push_str(&o.summary());
    }
    art.write("criteria.txt", &body)?;
    let mut ck = Checks::default();
    for o in &outcomes {
        ck.add(&format!("criterion_{}", o.id), o.status(), o.passed);
    }
    ck.info("criteria_run", CRITERIA.len());
    ck.info("unexpected_failures", outcomes.iter().filter(|o| !o.acceptable()).count());
    ck.info("suite_acceptable", suite_acceptable(&outcomes));
    art.finish(Command::VerifyAll, &tolerances(cfg), &ck)
}
