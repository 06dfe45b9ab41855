use crate::ansatz::{build_rarefaction_ansatz, build_shock_ansatz, AnsatzFields, SmoothRarefaction};
use crate::error::{Error, Result};
use crate::numerics::{combined_hk, Grid1D};
use crate::periodic::{aligned_indices, CellState, PeriodicCell};
use crate::profile::ShockProfile;
use crate::riemann::{rarefaction_exact, sound_speed};
use crate::scenario::{RarefactionScenario, ShockScenario};
use crate::shifts::ShiftTrajectory;

use super::diagnostics::{observed_shift, DiagnosticRecord, DiagnosticsSeries};
use super::{ssp_step, BoundaryData, CauchyState, StepFluxes};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    pub cfl_hyperbolic: f64,
    pub cfl_parabolic: f64,
    pub t_end: f64,
    pub output_interval: f64,
    /// Half-width of the diagnostic window around the wave.
    pub window_half_width: f64,
    pub poisson_tol: f64,
    /// Required clearance between the boundary-influence horizon and the window, as a fraction.
    pub horizon_margin: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            cfl_hyperbolic: 0.4,
            cfl_parabolic: 0.25,
            t_end: 40.0,
            output_interval: 0.5,
            window_half_width: 30.0,
            poisson_tol: 1e-12,
            horizon_margin: 0.2,
        }
    }
}

/// Distance a boundary disturbance can travel by `T` against the room left on each side of the window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HorizonReport {
    /// `max(|u| + sqrt(A+1)) T + 4 sqrt(T)`.
    pub horizon: f64,
    pub margin_left: f64,
    pub margin_right: f64,
    pub satisfied: bool,
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        let pos = |v: f64, what: &str| -> Result<()> {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidArgument(format!("{what} must be positive, got {v}")))
            }
        };
        pos(self.cfl_hyperbolic, "cfl_hyperbolic")?;
        pos(self.cfl_parabolic, "cfl_parabolic")?;
        pos(self.t_end, "t_end")?;
        pos(self.output_interval, "output_interval")?;
        pos(self.window_half_width, "window_half_width")?;
        pos(self.poisson_tol, "poisson_tol")?;
        if self.cfl_parabolic > 0.5 {
            return Err(Error::InvalidArgument(format!("cfl_parabolic {} exceeds the explicit diffusion limit 0.5", self.cfl_parabolic)));
        }
        let n = self.t_end / self.output_interval;
        if (n - n.round()).abs() > 1e-9 * n.max(1.0) {
            return Err(Error::InvalidArgument(format!("t_end {} is not a multiple of output_interval {}", self.t_end, self.output_interval)));
        }
        Ok(())
    }

    pub fn horizon(&self, grid: &Grid1D, window: (f64, f64), vmax: f64) -> HorizonReport {
        let horizon = vmax * self.t_end + 4.0 * self.t_end.sqrt();
        let margin_left = window.0 - grid.x_min();
        let margin_right = grid.x_max() - window.1;
        let satisfied = margin_left.min(margin_right) >= (1.0 + self.horizon_margin) * horizon;
        HorizonReport { horizon, margin_left, margin_right, satisfied }
    }

    /// Smallest symmetric half-width `L` whose boundaries clear `window` by the
    /// required margin when signals travel at most at `vmax`.
    pub fn minimal_half_width(&self, window: (f64, f64), vmax: f64) -> f64 {
        let horizon = vmax * self.t_end + 4.0 * self.t_end.sqrt();
        (-window.0).max(window.1) + (1.0 + self.horizon_margin) * horizon
    }
}

#[derive(Debug, Clone)]
pub struct CauchyRun {
    pub series: DiagnosticsSeries,
    pub final_state: CauchyState,
    pub dt: f64,
    pub steps: usize,
    pub horizon: HorizonReport,
    /// Interior `(mass, momentum)` at the start.
    pub initial_totals: (f64, f64),
    /// Mass and momentum that entered through the end faces over the whole run.
    pub inflow: StepFluxes,
}

enum Background<'a> {
    Shock { profile: &'a ShockProfile, trajectory: &'a ShiftTrajectory, x_inf: f64 },
    Rarefaction { smooth: &'a SmoothRarefaction },
}

impl Background<'_> {
    /// Ansatz `(n, m, phi)` at one line node whose cell index is `j`.
    fn node(&self, t: f64, x: f64, j: usize, minus: &CellState, plus: &CellState) -> Result<[f64; 3]> {
        match self {
            Background::Shock { profile, trajectory, .. } => {
                let (sx, sy) = trajectory.at(t);
                let s = profile.speed();
                let px = profile.sample(x - s * t - sx);
                let py = profile.sample(x - s * t - sy);
                let (gx, gy) = (px.sigma, py.sigma);
                Ok([
                    px.jet.n + (1.0 - gx) * minus.rho[j] + gx * plus.rho[j],
                    py.jet.m + (1.0 - gy) * minus.w[j] + gy * plus.w[j],
                    px.jet.phi + (1.0 - gx) * minus.varphi[j] + gx * plus.varphi[j],
                ])
            }
            Background::Rarefaction { smooth } => {
                let r = smooth.sample(x, t)?;
                let (g, e) = smooth.weights(&r);
                let vel = |c: &CellState| (c.w[j] * c.n[j] - c.m[j] * c.rho[j]) / (c.n[j] * (c.n[j] - c.rho[j]));
                let n = r.n + (1.0 - g) * minus.rho[j] + g * plus.rho[j];
                let u = r.u + (1.0 - e) * vel(minus) + e * vel(plus);
                Ok([n, n * u, r.phi + (1.0 - g) * minus.varphi[j] + g * plus.varphi[j]])
            }
        }
    }

    fn ansatz(&self, grid: &Grid1D, cells: &[PeriodicCell; 2]) -> Result<AnsatzFields> {
        let (vm, vp) = (cells[0].view(), cells[1].view());
        match self {
            Background::Shock { profile, trajectory, .. } => {
                let (x, y) = trajectory.at(vm.state.t);
                build_shock_ansatz(grid, profile, &vm, &vp, x, y)
            }
            Background::Rarefaction { smooth } => build_rarefaction_ansatz(grid, smooth, &vm, &vp),
        }
    }

    fn window(&self, t: f64, w: f64) -> (f64, f64) {
        match self {
            Background::Shock { profile, x_inf, .. } => {
                let c = profile.speed() * t + x_inf;
                (c - w, c + w)
            }
            Background::Rarefaction { smooth } => {
                let (wl, wr) = smooth.endpoints.w_bounds();
                ((wl * t).min(0.0) - w, (wr * t).max(0.0) + w)
            }
        }
    }

    /// Union of the windows over `[0, t_end]`.
    fn window_span(&self, t_end: f64, w: f64) -> (f64, f64) {
        let (a0, b0) = self.window(0.0, w);
        let (a1, b1) = self.window(t_end, w);
        (a0.min(a1), b0.max(b1))
    }

    fn distance(&self, state: &CauchyState, w: f64) -> f64 {
        let (lo, hi) = self.window(state.t, w);
        let t = state.t;
        let (n, m, phi) = (state.n.values(), state.m.values(), state.phi.values());
        let mut worst = 0.0_f64;
        for (i, x) in state.grid.points().into_iter().enumerate() {
            if x < lo || x > hi {
                continue;
            }
            let d = match self {
                Background::Shock { profile, x_inf, .. } => {
                    let q = profile.sample(x - profile.speed() * t - x_inf).jet;
                    (n[i] - q.n).abs().max((m[i] - q.m).abs()).max((phi[i] - q.phi).abs())
                }
                Background::Rarefaction { smooth } => {
                    let xi = if t > 0.0 { x / t } else if x > 0.0 { f64::INFINITY } else { f64::NEG_INFINITY };
                    let (nr, ur, pr) = rarefaction_exact(&smooth.endpoints, xi);
                    (n[i] - nr).abs().max((m[i] / n[i] - ur).abs()).max((phi[i] - pr).abs())
                }
            };
            worst = worst.max(d);
        }
        worst
    }

    fn record(&self, state: &CauchyState, cells: &[PeriodicCell; 2], w: f64) -> Result<DiagnosticRecord> {
        let a = self.ansatz(&state.grid, cells)?;
        let dn = state.n.linear_combination(1.0, &a.n_sharp, -1.0)?;
        let dm = state.m.linear_combination(1.0, &a.m_sharp, -1.0)?;
        let dp = state.phi.linear_combination(1.0, &a.phi_sharp, -1.0)?;
        let shift_obs = match self {
            Background::Shock { profile, x_inf, .. } => Some(observed_shift(state, profile, *x_inf, w)),
            Background::Rarefaction { .. } => None,
        };
        Ok(DiagnosticRecord {
            t: state.t,
            dist_linf: self.distance(state, w),
            shift_obs,
            h1_pert_norm: combined_hk(&[&dn, &dm, &dp], 1)?,
            phi_l2: dp.l2(),
            anti_phi: dn.cumulative().l2(),
            anti_psi: dm.cumulative().l2(),
            mass_total: dn.integral(),
            momentum_total: dm.integral(),
            poisson_residual: state.poisson_residual(),
        })
    }
}

fn boundary(bg: &Background, grid: &Grid1D, idx: (usize, usize), t: f64, minus: &CellState, plus: &CellState) -> Result<BoundaryData> {
    Ok(BoundaryData {
        left: bg.node(t, grid.x_min(), idx.0, minus, plus)?,
        right: bg.node(t, grid.x_max(), idx.1, minus, plus)?,
    })
}

fn end_indices(grid: &Grid1D, cell: &PeriodicCell) -> Result<(usize, usize)> {
    let idx = aligned_indices(grid, cell.h, cell.n_cells())
        .ok_or_else(|| Error::InvalidArgument("line grid is not aligned with the periodic cell lattice".into()))?;
    Ok((idx[0], idx[idx.len() - 1]))
}

fn evolve(bg: Background, mut cells: [PeriodicCell; 2], mut state: CauchyState, config: &SolverConfig) -> Result<CauchyRun> {
    config.validate()?;
    let a = cells[0].temperature;
    let grid = state.grid;
    let idx = end_indices(&grid, &cells[0])?;
    let c = sound_speed(a);
    let vmax = state.n.values().iter().zip(state.m.values()).fold(0.0_f64, |v, (n, m)| v.max((m / n).abs() + c));
    let horizon = config.horizon(&grid, bg.window_span(config.t_end, config.window_half_width), vmax);
    if !horizon.satisfied {
        return Err(Error::InvalidArgument(format!(
            "line too short: horizon {:.1} needs margins of {:.1}, have {:.1} and {:.1}",
            horizon.horizon,
            (1.0 + config.horizon_margin) * horizon.horizon,
            horizon.margin_left,
            horizon.margin_right
        )));
    }
    let limit = state.stable_dt(a, config.cfl_hyperbolic, config.cfl_parabolic).min(cells[0].stable_dt()).min(cells[1].stable_dt());
    let substeps = (config.output_interval / limit).ceil().max(1.0) as usize;
    let dt = config.output_interval / substeps as f64;
    let n_out = (config.t_end / config.output_interval).round() as usize;
    let initial_totals = state.interior_totals();
    let mut inflow = StepFluxes::default();
    let mut series = DiagnosticsSeries::default();
    series.records.push(bg.record(&state, &cells, config.window_half_width)?);
    let mut steps = 0;
    for k in 1..=n_out {
        for _ in 0..substeps {
            let t1 = state.t + dt;
            let stage_m = cells[0].step_with_stage(dt)?;
            let stage_p = cells[1].step_with_stage(dt)?;
            let bc_stage = boundary(&bg, &grid, idx, t1, &stage_m, &stage_p)?;
            let bc_end = boundary(&bg, &grid, idx, t1, &cells[0].state, &cells[1].state)?;
            let (next, f) = ssp_step(&state, dt, a, &bc_stage, &bc_end, config.poisson_tol)?;
            state = next;
            inflow.mass += f.mass;
            inflow.momentum += f.momentum;
            steps += 1;
        }
        let t_out = k as f64 * config.output_interval;
        state.t = t_out;
        for c in cells.iter_mut() {
            c.state.t = t_out;
        }
        let lim = state.stable_dt(a, config.cfl_hyperbolic, config.cfl_parabolic);
        if dt > lim * (1.0 + 1e-12) {
            return Err(Error::CflViolation { dt, limit: lim });
        }
        series.records.push(bg.record(&state, &cells, config.window_half_width)?);
    }
    Ok(CauchyRun { series, final_state: state, dt, steps, horizon, initial_totals, inflow })
}

/// Initial state of a perturbed shock run: the zero-mass corrected data with the
/// potential solved against the ansatz end values.
pub fn init_shock(scenario: &ShockScenario, tol: f64) -> Result<CauchyState> {
    let bg = Background::Shock { profile: &scenario.profile, trajectory: &scenario.trajectory, x_inf: scenario.correction.asymptotic.x_inf };
    let cm = scenario.minus.cell();
    let cp = scenario.plus.cell();
    let bc = boundary(&bg, &scenario.grid, end_indices(&scenario.grid, cm)?, 0.0, &cm.state, &cp.state)?;
    CauchyState::new(0.0, scenario.n0.clone(), scenario.m0.clone(), (bc.left[2], bc.right[2]), tol)
}

/// Initial state of a perturbed rarefaction run: the ansatz at time zero.
pub fn init_rarefaction(scenario: &RarefactionScenario, tol: f64) -> Result<CauchyState> {
    let a = scenario.ansatz(0)?;
    let last = a.phi_sharp.values().len() - 1;
    let ends = (a.phi_sharp.values()[0], a.phi_sharp.values()[last]);
    CauchyState::new(0.0, a.n_sharp, a.m_sharp, ends, tol)
}

pub fn run_shock(scenario: &ShockScenario, config: &SolverConfig) -> Result<CauchyRun> {
    let state = init_shock(scenario, config.poisson_tol)?;
    let bg = Background::Shock { profile: &scenario.profile, trajectory: &scenario.trajectory, x_inf: scenario.correction.asymptotic.x_inf };
    evolve(bg, [scenario.minus.cell().clone(), scenario.plus.cell().clone()], state, config)
}

pub fn run_rarefaction(scenario: &RarefactionScenario, config: &SolverConfig) -> Result<CauchyRun> {
    let state = init_rarefaction(scenario, config.poisson_tol)?;
    let bg = Background::Rarefaction { smooth: &scenario.smooth };
    evolve(bg, [scenario.minus.cell().clone(), scenario.plus.cell().clone()], state, config)
}
