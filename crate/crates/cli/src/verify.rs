//! The acceptance suite: nine end-to-end criteria, each with its own tolerances
//! and wall-clock limit.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::time::{Duration, Instant};

use nalgebra::{DMatrix, DVector};
use nsp_core::ansatz::{burgers_smooth, remainder_decay_checks, RemainderSample, SmoothRarefaction};
use nsp_core::cauchy::{run_rarefaction, run_shock, CauchyRun};
use nsp_core::numerics::{BoundaryKind, Grid1D, SpatialField, TridiagonalSystem};
use nsp_core::periodic::{cell_grid, poisson_boltzmann_solve, PeriodicHistory, PerturbationSpec, PoissonBoundary};
use nsp_core::profile::{compute_profile, fit_profile_decay, traveling_wave_residual, verify_profile_structure, ProfileOptions};
use nsp_core::riemann::{hugoniot_connect, EndState, RarefactionEndpoints};
use nsp_core::scenario::{blended_line_data, CellSetup, RarefactionScenario, ShockScenario};
use nsp_core::shifts::{enforce_zero_mass, shift_rhs, ShiftState};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::{ExperimentConfig, ScenarioKind};
use crate::error::{CliResult, Context};

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub value: String,
    pub passed: bool,
    pub asserted: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub id: u8,
    pub name: &'static str,
    /// All checks passed within the time limit.
    pub passed: bool,
    /// Known to be out of reach at this scale; failing it does not fail the suite.
    pub expected_failure: bool,
    pub checks: Checks,
    pub error: Option<String>,
    pub elapsed: Duration,
    pub limit: Duration,
}

impl Outcome {
    pub fn status(&self) -> &'static str {
        match (self.passed, self.expected_failure) {
            (true, _) => "PASS",
            (false, true) => "XFAIL",
            (false, false) => "FAIL",
        }
    }

    pub fn acceptable(&self) -> bool {
        self.passed || self.expected_failure
    }

    /// One line: status, id, name, elapsed time and the first failing check.
    pub fn line(&self) -> String {
        let mut s = format!(
            "{:<5} [{}] {} ({:.1} s / limit {:.0} s)",
            self.status(),
            self.id,
            self.name,
            self.elapsed.as_secs_f64(),
            self.limit.as_secs_f64()
        );
        if let Some(e) = &self.error {
            let _ = write!(s, ": error: {e}");
        } else if let Some(c) = self.checks.0.iter().find(|c| !c.passed) {
            let _ = write!(s, ": {} = {}", c.name, c.value);
        }
        s
    }

    /// `key = value` lines under the prefix `c<id>.`.
    pub fn summary(&self) -> String {
        let mut s = String::new();
        let p = format!("c{}", self.id);
        let _ = writeln!(s, "{p}.name = {}", self.name);
        let _ = writeln!(s, "{p}.passed = {}", self.passed);
        let _ = writeln!(s, "{p}.expected_failure = {}", self.expected_failure);
        let _ = writeln!(s, "{p}.elapsed_s = {:.3}", self.elapsed.as_secs_f64());
        let _ = writeln!(s, "{p}.limit_s = {:.0}", self.limit.as_secs_f64());
        if let Some(e) = &self.error {
            let _ = writeln!(s, "{p}.error = {e}");
        }
        s.push_str(&self.checks.lines(&format!("{p}.")));
        s
    }
}

/// Named checks; informational entries carry no pass flag of their own.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Checks(pub Vec<Check>);

impl Checks {
    pub fn add(&mut self, name: &str, value: impl std::fmt::Display, passed: bool) {
        self.0.push(Check { name: name.to_string(), value: value.to_string(), passed, asserted: true });
    }

    pub fn info(&mut self, name: &str, value: impl std::fmt::Display) {
        self.0.push(Check { name: name.to_string(), value: value.to_string(), passed: true, asserted: false });
    }

    pub fn all_passed(&self) -> bool {
        self.0.iter().all(|c| c.passed)
    }

    /// `name = value` lines, with `name.pass = bool` after asserted entries.
    pub fn lines(&self, prefix: &str) -> String {
        let mut s = String::new();
        for c in &self.0 {
            let _ = writeln!(s, "{prefix}{} = {}", c.name, c.value);
            if c.asserted {
                let _ = writeln!(s, "{prefix}{}.pass = {}", c.name, c.passed);
            }
        }
        s
    }
}

pub const CRITERIA: [(u8, &str, u64); 9] = [
    (1, "shock profile correctness", 30),
    (2, "periodic decay", 120),
    (3, "shift consistency", 60),
    (4, "zero-mass enforcement", 10),
    (5, "ansatz residual envelopes", 120),
    (6, "perturbed shock stability", 900),
    (7, "perturbed rarefaction stability", 900),
    (8, "remainder calculus", 120),
    (9, "oracle suite", 30),
];

/// Criteria whose thresholds are not reachable at the prescribed scale.
const EXPECTED_FAILURES: [u8; 1] = [7];

/// Shared state: the perturbed shock scenario is built once and reused by the
/// shift, zero-mass, ansatz, Cauchy and remainder criteria. Its build time is
/// charged to the first criterion that needs it.
pub struct Suite {
    cfg: ExperimentConfig,
    shock: Option<ShockScenario>,
}

impl Suite {
    pub fn new(cfg: &ExperimentConfig) -> Self {
        let mut cfg = cfg.clone();
        cfg.scenario = ScenarioKind::Shock;
        Self { cfg, shock: None }
    }

    fn shock(&mut self) -> CliResult<&ShockScenario> {
        if self.shock.is_none() {
            let sc = self.cfg.shock_scenario()?;
            self.shock = Some(ShockScenario::build(&sc).context("shock scenario")?);
        }
        Ok(self.shock.as_ref().expect("built above"))
    }

    pub fn run(&mut self, id: u8) -> Outcome {
        let (_, name, limit) = CRITERIA.iter().copied().find(|c| c.0 == id).expect("criterion id in 1..=9");
        let limit = Duration::from_secs(limit);
        let start = Instant::now();
        let mut checks = Checks::default();
        let result = match id {
            1 => self.profile(&mut checks),
            2 => self.periodic(&mut checks),
            3 => self.shifts(&mut checks),
            4 => self.zero_mass(&mut checks),
            5 => self.envelopes(&mut checks),
            6 => self.shock_run(&mut checks),
            7 => self.rarefaction_run(&mut checks),
            8 => self.remainders(&mut checks),
            _ => self.oracles(&mut checks),
        };
        let elapsed = start.elapsed();
        let error = result.err().map(|e| e.to_string());
        let passed = error.is_none() && checks.all_passed() && elapsed <= limit;
        Outcome {
            id,
            name,
            passed,
            expected_failure: EXPECTED_FAILURES.contains(&id),
            checks,
            error,
            elapsed,
            limit,
        }
    }

    /// Runs every criterion in order, reporting each as it finishes.
    pub fn run_all(&mut self, mut report: impl FnMut(&Outcome)) -> Vec<Outcome> {
        CRITERIA
            .iter()
            .map(|c| {
                let o = self.run(c.0);
                report(&o);
                o
            })
            .collect()
    }

    fn profile(&mut self, ck: &mut Checks) -> CliResult<()> {
        let s = &self.cfg.shock;
        let conn = hugoniot_connect(&EndState::new(s.n_minus, s.u_minus).context("profile")?, s.n_minus - s.delta, self.cfg.temperature)
            .context("profile")?;
        let h = self.cfg.grid.profile_spacing;
        let coarse = compute_profile(&conn, &ProfileOptions { spacing: 2.0 * h, ..Default::default() }).context("profile")?;
        let fine = compute_profile(&conn, &ProfileOptions { spacing: h, ..Default::default() }).context("profile")?;
        let rc = traveling_wave_residual(&coarse).context("profile residual")?.max();
        let rf = traveling_wave_residual(&fine).context("profile residual")?.max();
        let ratio = rc / rf;
        ck.add("residual_halving_ratio", fmt(ratio), (3.5..=4.5).contains(&ratio));
        let rep = verify_profile_structure(&fine);
        ck.add("mass_flux_relative_defect", fmt(rep.mass_flux_defect), rep.mass_flux_defect <= 1e-6);
        ck.add("min_sigma_increment", fmt(rep.min_sigma_increment_resolved), rep.min_sigma_increment_resolved > 0.0);
        ck.add("sigma_at_zero", fmt(rep.sigma_at_zero), (rep.sigma_at_zero - 0.5).abs() <= 1e-12);
        ck.add("structure_violations", rep.violations.len(), rep.ok());
        let r2 = fit_profile_decay(&fine).context("tail fits")?.min_r_squared();
        ck.add("tail_fit_min_r_squared", fmt(r2), r2 >= 0.999);
        Ok(())
    }

    fn periodic(&mut self, ck: &mut Checks) -> CliResult<()> {
        let setup = CellSetup { t_end: 40.0, ..self.cfg.cell_setup() };
        let base = EndState::new(1.0, 0.0).context("periodic")?;
        let mut alphas = Vec::new();
        for (tag, nu) in [("nu_1e-3", 1e-3), ("nu_1e-4", 1e-4)] {
            let start = Instant::now();
            let spec = PerturbationSpec::single(2.0 * PI, 1, 1.0, 0.5)
                .and_then(|s| s.scaled_to_nu(nu, setup.cells))
                .context("periodic data")?;
            let h = setup.history(base, &spec, self.cfg.temperature).context("periodic evolution")?;
            let (dn, dm) = h.average_drift();
            ck.add(&format!("{tag}.average_drift"), fmt(dn.max(dm)), dn.max(dm) <= 1e-12);
            let fit = fit_of(&h)?;
            ck.add(&format!("{tag}.envelope_constant"), fmt(fit.0), fit.0 <= 10.0);
            ck.add(&format!("{tag}.fit_r_squared"), fmt(fit.1), fit.1 >= 0.99);
            ck.info(&format!("{tag}.alpha"), fmt(fit.2));
            let secs = start.elapsed().as_secs_f64();
            ck.add(&format!("{tag}.runtime_s"), format!("{secs:.2}"), secs <= 60.0);
            alphas.push(fit.2);
        }
        let spread = (alphas[0] - alphas[1]).abs() / alphas[0];
        ck.add("alpha_relative_spread", fmt(spread), spread <= 0.1);
        Ok(())
    }

    fn shifts(&mut self, ck: &mut Checks) -> CliResult<()> {
        let a = self.cfg.temperature;
        let sc = self.shock()?;
        let alpha = sc.alpha.ok_or_else(|| crate::error::CliError::invalid("perturbation", "no decay rate could be fitted"))?;
        let t_end = sc.config.cells.t_end;
        let smallness = sc.nu * (-2.0 * alpha * t_end).exp();
        ck.add("nu_exp_decay_at_T", fmt(smallness), smallness < 1e-6);
        let end = sc.trajectory.terminal();
        let asy = &sc.correction.asymptotic;
        let dx = (end.x - asy.x_inf).abs() / asy.x_inf.abs().max(1.0);
        let dy = (end.y - asy.y_inf).abs() / asy.y_inf.abs().max(1.0);
        ck.info("X_inf", fmt(asy.x_inf));
        ck.info("Y_inf", fmt(asy.y_inf));
        ck.add("terminal_X_mismatch", fmt(dx), dx <= 1e-3);
        ck.add("terminal_Y_mismatch", fmt(dy), dy <= 1e-3);

        let setup = CellSetup { t_end: 2.0, ..sc.config.cells };
        let zero = PerturbationSpec::zero(setup.period).context("zero perturbation")?;
        let zm = setup.history(sc.connection.left, &zero, a).context("zero history")?;
        let zp = setup.history(sc.connection.right, &zero, a).context("zero history")?;
        let mut worst = 0.0_f64;
        for t in [0.0, 0.5, 1.7] {
            let (xp, yp) = shift_rhs(t, &ShiftState { t, x: 0.3, y: -0.2 }, &zm, &zp, &sc.profile).context("shift rhs")?;
            worst = worst.max(xp.abs()).max(yp.abs());
        }
        ck.add("unperturbed_shift_speed", fmt(worst), worst <= 1e-12);
        Ok(())
    }

    fn zero_mass(&mut self, ck: &mut Checks) -> CliResult<()> {
        let bump = self.cfg.shock.density_bump;
        let sc = self.shock()?;
        let start = Instant::now();
        let c = &sc.config;
        let sm = c.minus.realize(c.cells.period, c.cells.cells).context("perturbation")?;
        let sp = c.plus.realize(c.cells.period, c.cells.cells).context("perturbation")?;
        let (n0, m0) = blended_line_data(&sc.grid, &sc.profile, &sm, &sp, bump).context("line data")?;
        let z = enforce_zero_mass(&n0, &m0, &sc.profile, &sc.minus, &sc.plus).context("zero-mass enforcement")?;
        ck.info("residual_before", fmt(z.residual_before));
        ck.add("residual_after", fmt(z.residual_after), z.residual_after.abs() <= 1e-10);
        let gap = (z.asymptotic.x_inf - z.asymptotic.y_inf).abs();
        ck.add("shift_limit_gap", fmt(gap), gap <= 1e-6);
        ck.info("enforcement_s", format!("{:.3}", start.elapsed().as_secs_f64()));
        Ok(())
    }

    fn envelopes(&mut self, ck: &mut Checks) -> CliResult<()> {
        let sc = self.shock()?;
        let alpha = sc.alpha.ok_or_else(|| crate::error::CliError::invalid("perturbation", "no decay rate could be fitted"))?;
        let d = sc.strength();
        let (mut ch, mut ca) = (0.0_f64, 0.0_f64);
        for k in sample_indices(sc.times(), 1.0, 1.0) {
            let t = sc.times()[k];
            let e = sc.error_terms(k).context("ansatz residuals")?;
            ch = ch.max(e.norms.combined_h2() * (alpha * t).exp() / (sc.nu * d.sqrt()));
            ca = ca.max(e.norms.combined_anti_l2() * (alpha * t).exp() / (sc.nu / d.sqrt()));
        }
        ck.info("alpha", fmt(alpha));
        ck.add("h2_envelope_constant", fmt(ch), ch <= 10.0);
        ck.add("antiderivative_envelope_constant", fmt(ca), ca <= 10.0);
        Ok(())
    }

    fn shock_run(&mut self, ck: &mut Checks) -> CliResult<()> {
        let solver = self.cfg.solver_config();
        let transient = self.cfg.solver.transient;
        let base_cfg = self.cfg.shock_scenario()?;
        let sc = self.shock()?;
        let h = sc.grid.spacing();
        ck.info("half_width", fmt(base_cfg.half_width));
        ck.add("n_points", sc.grid.n_points(), sc.grid.n_points() <= 4096);
        let run = run_shock(sc, &solver).context("shock run")?;
        ck.add("horizon_satisfied", run.horizon.satisfied, run.horizon.satisfied);
        let (peak, last, ratio) = run.series.post_transient_reduction(transient).context("distance series")?;
        ck.info("peak_distance", fmt(peak));
        ck.info("final_distance", fmt(last));
        ck.add("distance_reduction", fmt(ratio), ratio >= 10.0);
        let x_inf = sc.correction.asymptotic.x_inf;
        let shift = run.series.last().and_then(|r| r.shift_obs).unwrap_or(f64::NAN);
        let miss = (shift - x_inf).abs();
        ck.info("observed_shift", fmt(shift));
        ck.add("shift_miss_over_spacing", fmt(miss / h), miss <= 2.0 * h);

        let mut wide = base_cfg.clone();
        wide.half_width *= 2.0;
        let wide = ShockScenario::build(&wide).context("doubled-line scenario")?;
        let wide_run = run_shock(&wide, &solver).context("doubled-line run")?;
        let gap = run.series.max_distance_gap(&wide_run.series).context("distance gap")?;
        ck.add("doubled_line_gap", fmt(gap), gap < 1e-6);
        Ok(())
    }

    fn rarefaction_run(&mut self, ck: &mut Checks) -> CliResult<()> {
        let mut cfg = self.cfg.clone();
        cfg.scenario = ScenarioKind::Rarefaction;
        cfg.validate()?;
        let sc = RarefactionScenario::build(&cfg.rarefaction_scenario()?).context("rarefaction scenario")?;
        ck.info("n_points", sc.grid.n_points());
        let run: CauchyRun = run_rarefaction(&sc, &cfg.solver_config()).context("rarefaction run")?;
        let at = |t: f64| run.series.records.iter().find(|r| (r.t - t).abs() < 1e-9).map(|r| r.dist_linf);
        let t_end = cfg.t_end();
        let early = at(10.0).unwrap_or(f64::NAN);
        let late = at(t_end).unwrap_or(f64::NAN);
        ck.info("distance_t10", fmt(early));
        ck.info("distance_final", fmt(late));
        let ratio = late / early;
        ck.add("distance_ratio", fmt(ratio), ratio <= 0.25);
        let grid = sc.grid;
        let times: Vec<f64> = [1.0, 2.0, 5.0, 10.0, 20.0, 50.0, 100.0].into_iter().filter(|t| *t <= t_end).collect();
        let env = SmoothRarefaction::derivative_envelope(&sc.smooth, &grid, &times).context("derivative envelope")?;
        for (p, c) in ["1", "2", "inf"].iter().zip(env) {
            ck.add(&format!("derivative_constant_p{p}"), fmt(c), c <= 10.0);
        }
        Ok(())
    }

    fn remainders(&mut self, ck: &mut Checks) -> CliResult<()> {
        let sc = self.shock()?;
        let alpha = sc.alpha.ok_or_else(|| crate::error::CliError::invalid("perturbation", "no decay rate could be fitted"))?;
        let samples: Vec<RemainderSample> = sample_indices(sc.times(), 0.0, 1.0)
            .into_iter()
            .map(|k| sc.remainders(k))
            .collect::<nsp_core::Result<_>>()
            .context("remainders")?;
        let report = remainder_decay_checks(&samples, alpha, 1.0).context("remainder checks")?;
        for c in &report.checks {
            let rate = c.rate.map(fmt).unwrap_or_else(|| "exact".into());
            ck.add(&format!("{}.rate", c.name), rate, c.passed);
            ck.info(&format!("{}.growth_ratio_p1", c.name), fmt(c.growth_ratio[0]));
            ck.info(&format!("{}.growth_ratio_p2", c.name), fmt(c.growth_ratio[1]));
        }
        Ok(())
    }

    fn oracles(&mut self, ck: &mut Checks) -> CliResult<()> {
        let tri = tridiagonal_oracle(self.cfg.seed)?;
        ck.add("tridiagonal_vs_dense", fmt(tri), tri <= 1e-10);
        let b = burgers_oracle()?;
        ck.add("burgers_vs_characteristics", fmt(b), b <= 1e-8);
        let lin = poisson_linear_oracle()?;
        ck.add("poisson_vs_linear_fourier", fmt(lin), lin <= 1e-9);
        let (e1, e2) = (poisson_manufactured(101)?, poisson_manufactured(201)?);
        ck.add("poisson_manufactured_error", fmt(e1), e1 <= 1e-3);
        ck.add("poisson_manufactured_ratio", fmt(e1 / e2), (3.5..=4.5).contains(&(e1 / e2)));
        let rh = rh_oracle()?;
        ck.add("rankine_hugoniot_residual", fmt(rh), rh <= 1e-12);
        Ok(())
    }
}

fn fmt(x: f64) -> String {
    format!("{x:.6e}")
}

/// `(envelope constant, R^2, alpha)` of a periodic history.
fn fit_of(h: &PeriodicHistory) -> CliResult<(f64, f64, f64)> {
    let f = h.fitted_alpha.ok_or_else(|| crate::error::CliError::invalid("perturbation", "no decay rate could be fitted"))?;
    Ok((f.envelope_constant, f.r_squared, f.alpha))
}

/// Indices of output times `from, from + every, ...`.
fn sample_indices(times: &[f64], from: f64, every: f64) -> Vec<usize> {
    let mut out = Vec::new();
    let mut next = from;
    for (k, t) in times.iter().enumerate() {
        if *t >= next - 1e-9 {
            out.push(k);
            next += every;
        }
    }
    out
}

/// Largest relative difference between the banded solver and a dense LU
/// solve over random diagonally dominant systems, plain and cyclic.
pub fn tridiagonal_oracle(seed: u64) -> CliResult<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0_f64;
    for trial in 0..40 {
        let n = rng.random_range(3..200usize);
        let cyclic = trial % 2 == 1;
        let sub: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let sup: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let diag: Vec<f64> = (0..n).map(|i| sub[i].abs() + sup[i].abs() + rng.random_range(0.5..2.0)).collect();
        let rhs: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let mut dense = DMatrix::<f64>::zeros(n, n);
        for i in 0..n {
            dense[(i, i)] = diag[i];
            if i > 0 {
                dense[(i, i - 1)] = sub[i];
            } else if cyclic {
                dense[(0, n - 1)] = sub[0];
            }
            if i + 1 < n {
                dense[(i, i + 1)] = sup[i];
            } else if cyclic {
                dense[(n - 1, 0)] = sup[n - 1];
            }
        }
        let exact = dense.lu().solve(&DVector::from_vec(rhs.clone())).expect("diagonally dominant");
        let x = TridiagonalSystem::new(sub, diag, sup, rhs, cyclic).and_then(|s| s.solve()).context("tridiagonal solve")?;
        let scale = exact.amax().max(1.0);
        for i in 0..n {
            worst = worst.max((x[i] - exact[i]).abs() / scale);
        }
    }
    Ok(worst)
}

/// Implicit Burgers solution against values carried forward along
/// characteristics from a fine grid of feet.
pub fn burgers_oracle() -> CliResult<f64> {
    let e = RarefactionEndpoints::from_strength(EndState::new(1.0, 0.0).context("burgers")?, 0.2, 1.0).context("burgers")?;
    let (wl, wr) = e.w_bounds();
    let mut worst = 0.0_f64;
    for eps in [0.1, 1.0] {
        let w0 = |xi: f64| 0.5 * (wl + wr) + 0.5 * (wr - wl) * (eps * xi).tanh();
        let d = 1e-3;
        let feet: Vec<f64> = (0..=400_000).map(|i| -200.0 + i as f64 * d).collect();
        for t in [0.5, 5.0, 50.0] {
            let pushed: Vec<(f64, f64)> = feet.iter().map(|xi| (xi + t * w0(*xi), w0(*xi))).collect();
            for k in 0..=40 {
                let x = -40.0 + 3.0 * k as f64;
                let j = pushed.partition_point(|p| p.0 <= x);
                let (a, b) = (pushed[j - 1], pushed[j]);
                let traced = a.1 + (b.1 - a.1) * (x - a.0) / (b.0 - a.0);
                let w = burgers_smooth(x, t, &e, eps).context("burgers")?;
                worst = worst.max((w - traced).abs());
            }
        }
    }
    Ok(worst)
}

/// Small single-mode densities against the linearized Fourier potential.
pub fn poisson_linear_oracle() -> CliResult<f64> {
    let a = 1e-6;
    let mut worst = 0.0_f64;
    for k in [1.0, 2.0, 3.0] {
        let g = cell_grid(2.0 * PI, 256).context("grid")?;
        let n = SpatialField::from_fn(g, BoundaryKind::Periodic, |x| 1.0 + a * (k * x).cos()).context("density")?;
        let phi = poisson_boltzmann_solve(&n, PoissonBoundary::Periodic, 1e-14).context("poisson")?;
        for (x, p) in g.points().into_iter().zip(phi.values()) {
            worst = worst.max((p + a * (k * x).cos() / (k * k + 1.0)).abs());
        }
    }
    Ok(worst)
}

/// Sup error against a manufactured Dirichlet solution on `points` nodes.
pub fn poisson_manufactured(points: usize) -> CliResult<f64> {
    let g = Grid1D::new(-5.0, 5.0, points).context("grid")?;
    let exact = |x: f64| -0.2 * (-x * x).exp();
    let rhs = |x: f64| -0.2 * (4.0 * x * x - 2.0) * (-x * x).exp() + (-exact(x)).exp();
    let n = SpatialField::from_fn(g, BoundaryKind::Line, rhs).context("density")?;
    let bc = PoissonBoundary::Dirichlet { left: exact(-5.0), right: exact(5.0) };
    let phi = poisson_boltzmann_solve(&n, bc, 1e-12).context("poisson")?;
    Ok(g.points().into_iter().zip(phi.values()).map(|(x, p)| (p - exact(x)).abs()).fold(0.0, f64::max))
}

/// Largest jump-condition residual over a family of admissible shocks.
pub fn rh_oracle() -> CliResult<f64> {
    let mut worst = 0.0_f64;
    for a in [0.5, 1.0, 2.0] {
        for (nm, um) in [(1.1, 0.0), (2.0, 0.7), (1.0, -0.4)] {
            for frac in [0.01, 0.1, 0.3] {
                let left = EndState::new(nm, um).context("end state")?;
                let c = hugoniot_connect(&left, nm * (1.0 - frac), a).context("hugoniot")?;
                let (r1, r2) = c.rh_residuals();
                worst = worst.max(r1.abs()).max(r2.abs());
            }
        }
    }
    Ok(worst)
}

/// Exit-status rule: every criterion passed or is a known failure.
pub fn suite_acceptable(outcomes: &[Outcome]) -> bool {
    outcomes.iter().all(Outcome::acceptable)
}
