//! End-to-end assembly of the perturbed shock and rarefaction set-ups: end
//! states, background wave, periodic histories on both sides, line grid
//! aligned with the cells, and (for the shock) zero-mass initial data with its
//! shift trajectory.

use std::f64::consts::PI;

use crate::ansatz::{
    build_rarefaction_ansatz, catalogue_remainders, rarefaction_error_terms, shock_error_terms, AnsatzFields, ErrorTerms,
    RemainderSample, ShiftSample, SmoothRarefaction,
};
use crate::error::{Error, Result};
use crate::numerics::{BoundaryKind, Grid1D, SpatialField};
use crate::periodic::{evolve_periodic, EvolveOptions, Mode, PeriodicCell, PeriodicHistory, PerturbationSpec};
use crate::profile::{compute_profile, ProfileOptions, ShockProfile};
use crate::riemann::{hugoniot_connect, EndState, RarefactionEndpoints, ShockConnection};
use crate::shifts::{bump, enforce_zero_mass, integrate_shifts, ShiftTrajectory, ZeroMassCorrection};

/// Periodic data on one side: modes rescaled to a prescribed `H^3` size.
#[derive(Debug, Clone, PartialEq)]
pub struct SideSpec {
    pub modes: Vec<Mode>,
    pub nu: f64,
}

impl SideSpec {
    pub fn zero() -> Self {
        Self { modes: Vec::new(), nu: 0.0 }
    }

    pub fn realize(&self, period: f64, cells: usize) -> Result<PerturbationSpec> {
        if self.modes.is_empty() || self.nu == 0.0 {
            return PerturbationSpec::zero(period);
        }
        PerturbationSpec::new(period, self.modes.clone())?.scaled_to_nu(self.nu, cells)
    }
}

/// Default left-side perturbation used by the verification runs.
pub fn default_minus_modes() -> Vec<Mode> {
    vec![Mode { k: 1, amp_n: 1.0, amp_m: 0.4, phase_n: 0.3, phase_m: 1.1 }]
}

/// Default right-side perturbation used by the verification runs.
pub fn default_plus_modes() -> Vec<Mode> {
    vec![Mode { k: 1, amp_n: 0.7, amp_m: -0.5, phase_n: -0.8, phase_m: 0.2 }]
}

/// Periodic cell discretization and history length shared by both sides.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellSetup {
    pub period: f64,
    pub cells: usize,
    pub t_end: f64,
    pub output_interval: f64,
    pub transient: f64,
}

impl Default for CellSetup {
    fn default() -> Self {
        Self { period: 2.0 * PI, cells: 128, t_end: 40.0, output_interval: 0.05, transient: 1.0 }
    }
}

impl CellSetup {
    pub fn spacing(&self) -> f64 {
        self.period / self.cells as f64
    }

    pub fn history(&self, base: EndState, spec: &PerturbationSpec, temperature: f64) -> Result<PeriodicHistory> {
        let dt = PeriodicCell::new(base, spec, temperature, self.cells)?.stable_dt();
        let opts = EvolveOptions { n_cells: self.cells, output_interval: self.output_interval, transient: self.transient };
        evolve_periodic(base, spec, temperature, self.t_end, dt, &opts)
    }

    /// Line grid on `[lo, hi]` (rounded outwards) whose nodes sit on the cell lattice.
    pub fn line_grid(&self, lo: f64, hi: f64) -> Result<Grid1D> {
        if !(hi > lo) {
            return Err(Error::InvalidArgument(format!("empty line interval [{lo}, {hi}]")));
        }
        let h = self.spacing();
        let k0 = (lo / h).floor();
        let k1 = (hi / h).ceil();
        Grid1D::with_spacing(k0 * h, h, (k1 - k0) as usize + 1)
    }
}

/// Smallest positive decay rate among the fitted histories, if any was fitted.
pub fn combined_alpha(minus: &PeriodicHistory, plus: &PeriodicHistory) -> Option<f64> {
    let a = [minus.fitted_alpha, plus.fitted_alpha].iter().flatten().map(|f| f.alpha).fold(f64::INFINITY, f64::min);
    a.is_finite().then_some(a)
}

/// `sqrt(nu_-^2 + nu_+^2)`.
pub fn combined_nu(minus: &PeriodicHistory, plus: &PeriodicHistory) -> f64 {
    minus.nu.hypot(plus.nu)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShockScenarioConfig {
    pub temperature: f64,
    pub n_minus: f64,
    pub u_minus: f64,
    pub n_plus: f64,
    pub minus: SideSpec,
    pub plus: SideSpec,
    pub cells: CellSetup,
    /// Line half-width; rounded up to the cell lattice.
    pub half_width: f64,
    /// Amplitude of a localized density bump added to the initial data.
    pub density_bump: f64,
    pub profile: ProfileOptions,
}

impl Default for ShockScenarioConfig {
    fn default() -> Self {
        Self {
            temperature: 1.0,
            n_minus: 1.1,
            u_minus: 0.0,
            n_plus: 1.0,
            minus: SideSpec { modes: default_minus_modes(), nu: 1e-3 },
            plus: SideSpec { modes: default_plus_modes(), nu: 1e-3 },
            cells: CellSetup::default(),
            half_width: 200.0,
            density_bump: 0.0,
            profile: ProfileOptions::default(),
        }
    }
}

/// Perturbed shock: profile, periodic histories, zero-mass initial data and shifts.
#[derive(Debug, Clone)]
pub struct ShockScenario {
    pub config: ShockScenarioConfig,
    pub connection: ShockConnection,
    pub profile: ShockProfile,
    pub minus: PeriodicHistory,
    pub plus: PeriodicHistory,
    pub grid: Grid1D,
    pub n0: SpatialField,
    /// Momentum after the zero-mass correction.
    pub m0: SpatialField,
    pub correction: ZeroMassCorrection,
    pub trajectory: ShiftTrajectory,
    pub alpha: Option<f64>,
    pub nu: f64,
}

impl ShockScenario {
    pub fn build(config: &ShockScenarioConfig) -> Result<Self> {
        let a = config.temperature;
        let connection = hugoniot_connect(&EndState::new(config.n_minus, config.u_minus)?, config.n_plus, a)?;
        let profile = compute_profile(&connection, &config.profile)?;
        let c = &config.cells;
        let sm = config.minus.realize(c.period, c.cells)?;
        let sp = config.plus.realize(c.period, c.cells)?;
        let minus = c.history(connection.left, &sm, a)?;
        let plus = c.history(connection.right, &sp, a)?;
        let grid = c.line_grid(-config.half_width, config.half_width)?;
        let (n0, m0) = blended_line_data(&grid, &profile, &sm, &sp, config.density_bump)?;
        let correction = enforce_zero_mass(&n0, &m0, &profile, &minus, &plus)?;
        let trajectory = integrate_shifts(correction.x0, correction.y0, &minus, &plus, &profile, c.t_end)?;
        let alpha = combined_alpha(&minus, &plus);
        let nu = combined_nu(&minus, &plus);
        Ok(Self {
            config: config.clone(),
            connection,
            profile,
            minus,
            plus,
            grid,
            n0,
            m0: correction.m0.clone(),
            correction,
            trajectory,
            alpha,
            nu,
        })
    }

    pub fn strength(&self) -> f64 {
        self.connection.strength
    }

    pub fn times(&self) -> &[f64] {
        &self.minus.times
    }

    pub fn shifts(&self, k: usize) -> Result<ShiftSample> {
        ShiftSample::from_trajectory(&self.trajectory, &self.minus, &self.plus, &self.profile, k)
    }

    pub fn ansatz(&self, k: usize) -> Result<AnsatzFields> {
        let (x, y) = self.trajectory.at(self.minus.times[k]);
        crate::ansatz::build_shock_ansatz(&self.grid, &self.profile, &self.minus.view(k), &self.plus.view(k), x, y)
    }

    pub fn error_terms(&self, k: usize) -> Result<ErrorTerms> {
        shock_error_terms(&self.grid, &self.profile, &self.minus.view(k), &self.plus.view(k), self.shifts(k)?)
    }

    pub fn remainders(&self, k: usize) -> Result<RemainderSample> {
        catalogue_remainders(&self.grid, &self.profile, &self.minus.view(k), &self.plus.view(k), self.shifts(k)?)
    }
}

/// `profile + rho0^-(1 - sigma) + rho0^+ sigma (+ bump)` and the momentum analogue.
pub fn blended_line_data(
    grid: &Grid1D,
    profile: &ShockProfile,
    minus: &PerturbationSpec,
    plus: &PerturbationSpec,
    density_bump: f64,
) -> Result<(SpatialField, SpatialField)> {
    let n0 = SpatialField::from_fn(*grid, BoundaryKind::Line, |x| {
        let q = profile.sample(x);
        q.jet.n + minus.rho(x) * (1.0 - q.sigma) + plus.rho(x) * q.sigma + density_bump * bump(x)
    })?;
    let m0 = SpatialField::from_fn(*grid, BoundaryKind::Line, |x| {
        let q = profile.sample(x);
        q.jet.m + minus.w(x) * (1.0 - q.sigma) + plus.w(x) * q.sigma
    })?;
    Ok((n0, m0))
}

#[derive(Debug, Clone, PartialEq)]
pub struct RarefactionScenarioConfig {
    pub temperature: f64,
    pub n_minus: f64,
    pub u_minus: f64,
    /// Rarefaction strength `|n_+ - n_-|`.
    pub strength: f64,
    pub epsilon: f64,
    pub minus: SideSpec,
    pub plus: SideSpec,
    pub cells: CellSetup,
    /// Line extent; rounded outwards to the cell lattice.
    pub x_min: f64,
    pub x_max: f64,
}

impl Default for RarefactionScenarioConfig {
    fn default() -> Self {
        Self {
            temperature: 1.0,
            n_minus: 1.0,
            u_minus: 0.0,
            strength: 0.2,
            epsilon: 0.1,
            minus: SideSpec { modes: default_minus_modes(), nu: 1e-3 },
            plus: SideSpec { modes: default_plus_modes(), nu: 1e-3 },
            cells: CellSetup { cells: 64, t_end: 100.0, ..CellSetup::default() },
            x_min: -280.0,
            x_max: 430.0,
        }
    }
}

/// Perturbed rarefaction: smoothed fan, periodic histories and line grid.
#[derive(Debug, Clone)]
pub struct RarefactionScenario {
    pub config: RarefactionScenarioConfig,
    pub smooth: SmoothRarefaction,
    pub minus: PeriodicHistory,
    pub plus: PeriodicHistory,
    pub grid: Grid1D,
    pub alpha: Option<f64>,
    pub nu: f64,
}

impl RarefactionScenario {
    pub fn build(config: &RarefactionScenarioConfig) -> Result<Self> {
        let a = config.temperature;
        let ends = RarefactionEndpoints::from_strength(EndState::new(config.n_minus, config.u_minus)?, config.strength, a)?;
        let smooth = SmoothRarefaction::new(ends, config.epsilon)?;
        let c = &config.cells;
        let minus = c.history(ends.left, &config.minus.realize(c.period, c.cells)?, a)?;
        let plus = c.history(ends.right, &config.plus.realize(c.period, c.cells)?, a)?;
        let grid = c.line_grid(config.x_min, config.x_max)?;
        let alpha = combined_alpha(&minus, &plus);
        let nu = combined_nu(&minus, &plus);
        Ok(Self { config: config.clone(), smooth, minus, plus, grid, alpha, nu })
    }

    pub fn times(&self) -> &[f64] {
        &self.minus.times
    }

    pub fn ansatz(&self, k: usize) -> Result<AnsatzFields> {
        build_rarefaction_ansatz(&self.grid, &self.smooth, &self.minus.view(k), &self.plus.view(k))
    }

    pub fn error_terms(&self, k: usize) -> Result<ErrorTerms> {
        rarefaction_error_terms(&self.grid, &self.smooth, &self.minus.view(k), &self.plus.view(k))
    }
}
