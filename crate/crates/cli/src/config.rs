//! Experiment configuration read from a TOML file: flat `key = value` lines
//! grouped under `[section]` headers. Every key has a default, so a shock run
//! needs only its states and strength.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use nsp_core::cauchy::SolverConfig;
use nsp_core::periodic::Mode;
use nsp_core::profile::ProfileOptions;
use nsp_core::riemann::{hugoniot_connect, sound_speed, EndState, RarefactionEndpoints};
use nsp_core::scenario::{CellSetup, RarefactionScenarioConfig, ShockScenarioConfig, SideSpec};
use nsp_core::shifts::MAX_BUMP;
use serde::Deserialize;

use crate::error::{CliError, CliResult, Context};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum ScenarioKind {
    #[default]
    Shock,
    Rarefaction,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ShockSection {
    pub n_minus: f64,
    pub u_minus: f64,
    /// Density jump `n_- - n_+`.
    pub delta: f64,
    /// Amplitude of the localized density bump added to the initial data.
    pub density_bump: f64,
}

impl Default for ShockSection {
    fn default() -> Self {
        Self { n_minus: 1.1, u_minus: 0.0, delta: 0.1, density_bump: 0.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RarefactionSection {
    pub n_minus: f64,
    pub u_minus: f64,
    pub delta: f64,
    /// Smoothing rate of the initial Burgers data.
    pub epsilon: f64,
}

impl Default for RarefactionSection {
    fn default() -> Self {
        Self { n_minus: 1.0, u_minus: 0.0, delta: 0.2, epsilon: 0.1 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModeEntry {
    pub k: u32,
    pub amp_n: f64,
    pub amp_m: f64,
    #[serde(default)]
    pub phase_n: f64,
    #[serde(default)]
    pub phase_m: f64,
}

impl From<ModeEntry> for Mode {
    fn from(m: ModeEntry) -> Self {
        Mode { k: m.k, amp_n: m.amp_n, amp_m: m.amp_m, phase_n: m.phase_n, phase_m: m.phase_m }
    }
}

impl From<Mode> for ModeEntry {
    fn from(m: Mode) -> Self {
        ModeEntry { k: m.k, amp_n: m.amp_n, amp_m: m.amp_m, phase_n: m.phase_n, phase_m: m.phase_m }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PerturbationSection {
    pub nu_minus: f64,
    pub nu_plus: f64,
    pub modes_minus: Vec<ModeEntry>,
    pub modes_plus: Vec<ModeEntry>,
}

impl Default for PerturbationSection {
    fn default() -> Self {
        Self {
            nu_minus: 1e-3,
            nu_plus: 1e-3,
            modes_minus: nsp_core::scenario::default_minus_modes().into_iter().map(Into::into).collect(),
            modes_plus: nsp_core::scenario::default_plus_modes().into_iter().map(Into::into).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridSection {
    pub period: f64,
    /// Nodes per period; the line grid uses the same spacing.
    pub cells: usize,
    /// Shock line `[-L, L]`; chosen by the boundary-horizon rule when absent.
    pub half_width: Option<f64>,
    /// Rarefaction line; chosen by the boundary-horizon rule when absent.
    pub x_min: Option<f64>,
    pub x_max: Option<f64>,
    /// Optional cross-check of the resulting line size.
    pub n_points: Option<usize>,
    pub profile_spacing: f64,
}

impl Default for GridSection {
    fn default() -> Self {
        Self {
            period: 2.0 * PI,
            cells: 64,
            half_width: None,
            x_min: None,
            x_max: None,
            n_points: None,
            profile_spacing: 0.05,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverSection {
    /// Defaults to 40 for shocks and 100 for rarefactions.
    pub t_end: Option<f64>,
    pub output_interval: f64,
    /// Snapshot spacing of the periodic histories.
    pub cell_output_interval: f64,
    pub window_half_width: f64,
    pub cfl_hyperbolic: f64,
    pub cfl_parabolic: f64,
    pub horizon_margin: f64,
    pub poisson_tol: f64,
    /// Start of the post-transient part of the series.
    pub transient: f64,
}

impl Default for SolverSection {
    fn default() -> Self {
        let s = SolverConfig::default();
        Self {
            t_end: None,
            output_interval: s.output_interval,
            cell_output_interval: 0.05,
            window_half_width: s.window_half_width,
            cfl_hyperbolic: s.cfl_hyperbolic,
            cfl_parabolic: s.cfl_parabolic,
            horizon_margin: s.horizon_margin,
            poisson_tol: s.poisson_tol,
            transient: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SmallnessSection {
    /// Largest admissible `nu / delta`.
    pub gamma0: f64,
    /// Largest admissible `H^2` norm of the initial antiderivatives.
    pub epsilon0: f64,
}

impl Default for SmallnessSection {
    fn default() -> Self {
        Self { gamma0: 0.1, epsilon0: 0.5 }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    pub scenario: ScenarioKind,
    pub temperature: f64,
    pub output_dir: PathBuf,
    /// Seed for randomized oracle systems.
    pub seed: u64,
    pub shock: ShockSection,
    pub rarefaction: RarefactionSection,
    pub perturbation: PerturbationSection,
    pub grid: GridSection,
    pub solver: SolverSection,
    pub smallness: SmallnessSection,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            scenario: ScenarioKind::Shock,
            temperature: 1.0,
            output_dir: PathBuf::from("out"),
            seed: 7,
            shock: ShockSection::default(),
            rarefaction: RarefactionSection::default(),
            perturbation: PerturbationSection::default(),
            grid: GridSection::default(),
            solver: SolverSection::default(),
            smallness: SmallnessSection::default(),
        }
    }
}

pub fn parse_config(path: &Path) -> CliResult<ExperimentConfig> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Read { path: path.to_path_buf(), source })?;
    parse_config_str(&text)
}

pub fn parse_config_str(text: &str) -> CliResult<ExperimentConfig> {
    let cfg: ExperimentConfig = toml::from_str(text)?;
    cfg.validate()?;
    Ok(cfg)
}

fn positive(key: &str, v: f64) -> CliResult<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(CliError::invalid(key, format!("must be positive and finite, got {v}")))
    }
}

impl ExperimentConfig {
    /// Strength of the active wave.
    pub fn delta(&self) -> f64 {
        match self.scenario {
            ScenarioKind::Shock => self.shock.delta,
            ScenarioKind::Rarefaction => self.rarefaction.delta,
        }
    }

    pub fn t_end(&self) -> f64 {
        self.solver.t_end.unwrap_or(match self.scenario {
            ScenarioKind::Shock => 40.0,
            ScenarioKind::Rarefaction => 100.0,
        })
    }

    pub fn spacing(&self) -> f64 {
        self.grid.period / self.grid.cells as f64
    }

    /// Multiplies the cell count by `factor` and divides the profile spacing by it.
    pub fn refined(&self, factor: usize) -> CliResult<Self> {
        if factor == 0 {
            return Err(CliError::invalid("--refine", "factor must be at least 1"));
        }
        let mut c = self.clone();
        c.grid.cells *= factor;
        c.grid.profile_spacing /= factor as f64;
        c.grid.n_points = c.grid.n_points.map(|n| (n - 1) * factor + 1);
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> CliResult<()> {
        positive("temperature", self.temperature)?;
        let s = &self.shock;
        positive("shock.n_minus", s.n_minus)?;
        positive("shock.delta", s.delta)?;
        if s.delta >= s.n_minus {
            return Err(CliError::invalid("shock.delta", format!("must be below shock.n_minus = {}", s.n_minus)));
        }
        if s.density_bump.abs() > MAX_BUMP {
            return Err(CliError::invalid("shock.density_bump", format!("|{}| exceeds the smallness bound {MAX_BUMP}", s.density_bump)));
        }
        let r = &self.rarefaction;
        positive("rarefaction.n_minus", r.n_minus)?;
        positive("rarefaction.delta", r.delta)?;
        positive("rarefaction.epsilon", r.epsilon)?;
        let p = &self.perturbation;
        let bound = self.smallness.gamma0 * self.delta();
        for (key, nu) in [("perturbation.nu_minus", p.nu_minus), ("perturbation.nu_plus", p.nu_plus)] {
            if !(nu >= 0.0) || !nu.is_finite() {
                return Err(CliError::invalid(key, format!("must be non-negative, got {nu}")));
            }
            if nu > bound {
                return Err(CliError::invalid(
                    key,
                    format!(
                        "{nu} violates the smallness condition nu <= gamma0 * delta = {} * {} = {bound}",
                        self.smallness.gamma0,
                        self.delta()
                    ),
                ));
            }
        }
        for (key, modes) in [("perturbation.modes_minus", &p.modes_minus), ("perturbation.modes_plus", &p.modes_plus)] {
            if modes.iter().any(|m| m.k == 0) {
                return Err(CliError::invalid(key, "mode numbers must be at least 1 (perturbations have zero average)"));
            }
        }
        positive("smallness.gamma0", self.smallness.gamma0)?;
        positive("smallness.epsilon0", self.smallness.epsilon0)?;
        let g = &self.grid;
        positive("grid.period", g.period)?;
        positive("grid.profile_spacing", g.profile_spacing)?;
        if g.cells < 8 {
            return Err(CliError::invalid("grid.cells", format!("need at least 8 nodes per period, got {}", g.cells)));
        }
        if let Some(l) = g.half_width {
            positive("grid.half_width", l)?;
        }
        if let (Some(a), Some(b)) = (g.x_min, g.x_max) {
            if !(b > a) {
                return Err(CliError::invalid("grid.x_max", format!("must exceed grid.x_min = {a}")));
            }
        }
        let v = &self.solver;
        positive("solver.t_end", self.t_end())?;
        positive("solver.output_interval", v.output_interval)?;
        positive("solver.cell_output_interval", v.cell_output_interval)?;
        positive("solver.window_half_width", v.window_half_width)?;
        positive("solver.cfl_hyperbolic", v.cfl_hyperbolic)?;
        positive("solver.cfl_parabolic", v.cfl_parabolic)?;
        positive("solver.poisson_tol", v.poisson_tol)?;
        if !(v.horizon_margin >= 0.0) {
            return Err(CliError::invalid("solver.horizon_margin", "must be non-negative"));
        }
        for (key, step) in [("solver.output_interval", v.output_interval), ("solver.cell_output_interval", v.cell_output_interval)] {
            let n = self.t_end() / step;
            if (n - n.round()).abs() > 1e-9 * n.max(1.0) {
                return Err(CliError::invalid(key, format!("{step} does not divide solver.t_end = {}", self.t_end())));
            }
        }
        if let Some(n) = g.n_points {
            self.check_n_points(n)?;
        }
        Ok(())
    }

    /// Line nodes sit on the cell lattice (the extent is rounded outwards), so
    /// only the lattice point count is accepted; anything else is rejected with
    /// that count as the suggestion.
    fn check_n_points(&self, n: usize) -> CliResult<()> {
        let (lo, hi) = self.line_extent().map_err(|e| CliError::invalid("grid.n_points", e.to_string()))?;
        let grid = self.cell_setup().line_grid(lo, hi).map_err(|e| CliError::invalid("grid.n_points", e.to_string()))?;
        let expected = grid.n_points();
        if n == expected {
            return Ok(());
        }
        let spacing = (grid.x_max() - grid.x_min()) / (n.max(2) - 1) as f64;
        Err(CliError::invalid(
            "grid.n_points",
            format!(
                "{n} points on [{:.6}, {:.6}] give spacing {spacing:.6}, which does not divide the period {:.6} into grid.cells = {} parts; use n_points = {expected}",
                grid.x_min(),
                grid.x_max(),
                self.grid.period,
                self.grid.cells
            ),
        ))
    }

    pub fn cell_setup(&self) -> CellSetup {
        CellSetup {
            period: self.grid.period,
            cells: self.grid.cells,
            t_end: self.t_end(),
            output_interval: self.solver.cell_output_interval,
            transient: self.solver.transient,
        }
    }

    pub fn solver_config(&self) -> SolverConfig {
        let v = &self.solver;
        SolverConfig {
            cfl_hyperbolic: v.cfl_hyperbolic,
            cfl_parabolic: v.cfl_parabolic,
            t_end: self.t_end(),
            output_interval: v.output_interval,
            window_half_width: v.window_half_width,
            poisson_tol: v.poisson_tol,
            horizon_margin: v.horizon_margin,
        }
    }

    fn sides(&self) -> (SideSpec, SideSpec) {
        let p = &self.perturbation;
        (
            SideSpec { modes: p.modes_minus.iter().map(|m| (*m).into()).collect(), nu: p.nu_minus },
            SideSpec { modes: p.modes_plus.iter().map(|m| (*m).into()).collect(), nu: p.nu_plus },
        )
    }

    /// Line extent before rounding to the lattice; the horizon rule fills in
    /// whatever the file leaves open.
    pub fn line_extent(&self) -> nsp_core::Result<(f64, f64)> {
        let sc = self.solver_config();
        let w = sc.window_half_width;
        let t = sc.t_end;
        let a = self.temperature;
        match self.scenario {
            ScenarioKind::Shock => {
                if let Some(l) = self.grid.half_width {
                    return Ok((-l, l));
                }
                let s = &self.shock;
                let conn = hugoniot_connect(&EndState::new(s.n_minus, s.u_minus)?, s.n_minus - s.delta, a)?;
                let vmax = 1.02 * (conn.left.u_bar.abs().max(conn.right.u_bar.abs()) + sound_speed(a));
                let st = conn.speed * t;
                let window = (st.min(0.0) - w - 5.0, st.max(0.0) + w + 5.0);
                let l = sc.minimal_half_width(window, vmax).ceil();
                Ok((-l, l))
            }
            ScenarioKind::Rarefaction => {
                let r = &self.rarefaction;
                let ends = RarefactionEndpoints::from_strength(EndState::new(r.n_minus, r.u_minus)?, r.delta, a)?;
                let vmax = 1.02 * (ends.left.u_bar.abs().max(ends.right.u_bar.abs()) + sound_speed(a));
                let (wl, wr) = ends.w_bounds();
                let window = ((wl * t).min(0.0) - w, (wr * t).max(0.0) + w);
                let reach = (1.0 + sc.horizon_margin) * (vmax * t + 4.0 * t.sqrt());
                Ok((
                    self.grid.x_min.unwrap_or((window.0 - reach).floor()),
                    self.grid.x_max.unwrap_or((window.1 + reach).ceil()),
                ))
            }
        }
    }

    pub fn shock_scenario(&self) -> CliResult<ShockScenarioConfig> {
        let (minus, plus) = self.sides();
        let (_, l) = self.line_extent().context("line extent")?;
        let s = &self.shock;
        Ok(ShockScenarioConfig {
            temperature: self.temperature,
            n_minus: s.n_minus,
            u_minus: s.u_minus,
            n_plus: s.n_minus - s.delta,
            minus,
            plus,
            cells: self.cell_setup(),
            half_width: l,
            density_bump: s.density_bump,
            profile: self.profile_options(),
        })
    }

    pub fn rarefaction_scenario(&self) -> CliResult<RarefactionScenarioConfig> {
        let (minus, plus) = self.sides();
        let (x_min, x_max) = self.line_extent().context("line extent")?;
        let r = &self.rarefaction;
        Ok(RarefactionScenarioConfig {
            temperature: self.temperature,
            n_minus: r.n_minus,
            u_minus: r.u_minus,
            strength: r.delta,
            epsilon: r.epsilon,
            minus,
            plus,
            cells: self.cell_setup(),
            x_min,
            x_max,
        })
    }

    pub fn profile_options(&self) -> ProfileOptions {
        ProfileOptions { spacing: self.grid.profile_spacing, ..ProfileOptions::default() }
    }
}
