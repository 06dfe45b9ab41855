//! Periodic NSP solutions on a cell: zero-average perturbations of a constant
//! state, their time evolution and the fitted exponential decay rate.

pub mod poisson;
pub mod scheme;

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::numerics::{combined_hk, fit_exponential_decay, hermite_cell, BoundaryKind, Grid1D, SpatialField};
use crate::riemann::EndState;

pub use poisson::{poisson_boltzmann_solve, PoissonBoundary};

/// Default Poisson-Boltzmann residual tolerance used by every evolution.
pub const POISSON_TOL: f64 = 1e-12;

/// One Fourier mode `amp cos(2 pi k x / period + phase)` of the density and momentum perturbation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mode {
    pub k: u32,
    pub amp_n: f64,
    pub amp_m: f64,
    pub phase_n: f64,
    pub phase_m: f64,
}

/// Zero-average perturbation `(rho_0, w_0)` of period `period`.
#[derive(Debug, Clone, PartialEq)]
pub struct PerturbationSpec {
    pub period: f64,
    pub modes: Vec<Mode>,
}

impl PerturbationSpec {
    pub fn new(period: f64, modes: Vec<Mode>) -> Result<Self> {
        if !(period > 0.0) || !period.is_finite() {
            return Err(Error::InvalidArgument(format!("period must be positive, got {period}")));
        }
        if let Some(m) = modes.iter().find(|m| m.k == 0) {
            return Err(Error::InvalidArgument(format!("mode wavenumber must be at least 1, got {}", m.k)));
        }
        if modes.iter().any(|m| ![m.amp_n, m.amp_m, m.phase_n, m.phase_m].iter().all(|v| v.is_finite())) {
            return Err(Error::NonFinite("perturbation mode"));
        }
        Ok(Self { period, modes })
    }

    pub fn zero(period: f64) -> Result<Self> {
        Self::new(period, Vec::new())
    }

    pub fn single(period: f64, k: u32, amp_n: f64, amp_m: f64) -> Result<Self> {
        Self::new(period, vec![Mode { k, amp_n, amp_m, phase_n: 0.0, phase_m: 0.0 }])
    }

    pub fn is_zero(&self) -> bool {
        self.modes.iter().all(|m| m.amp_n == 0.0 && m.amp_m == 0.0)
    }

    fn kappa(&self, m: &Mode) -> f64 {
        2.0 * PI * m.k as f64 / self.period
    }

    pub fn rho(&self, x: f64) -> f64 {
        self.modes.iter().map(|m| m.amp_n * (self.kappa(m) * x + m.phase_n).cos()).sum()
    }

    pub fn w(&self, x: f64) -> f64 {
        self.modes.iter().map(|m| m.amp_m * (self.kappa(m) * x + m.phase_m).cos()).sum()
    }

    /// Period average of the antiderivatives `int_0^x rho_0` and `int_0^x w_0`.
    pub fn mean_antiderivatives(&self) -> (f64, f64) {
        let mut r = (0.0, 0.0);
        for m in &self.modes {
            let k = self.kappa(m);
            r.0 -= m.amp_n * m.phase_n.sin() / k;
            r.1 -= m.amp_m * m.phase_m.sin() / k;
        }
        r
    }

    /// Samples at the `n_cells` distinct nodes `x_i = i period / n_cells`.
    pub fn realize(&self, n_cells: usize) -> (Vec<f64>, Vec<f64>) {
        let h = self.period / n_cells as f64;
        (0..n_cells).map(|i| (self.rho(i as f64 * h), self.w(i as f64 * h))).unzip()
    }

    /// Discrete `H^3` norm of `(rho_0, w_0)` over one period.
    pub fn nu(&self, n_cells: usize) -> Result<f64> {
        let grid = cell_grid(self.period, n_cells)?;
        let (r, w) = self.realize(n_cells);
        let r = SpatialField::periodic_from_cell(grid, &r)?;
        let w = SpatialField::periodic_from_cell(grid, &w)?;
        combined_hk(&[&r, &w], 3)
    }

    /// Same shape rescaled to the requested `H^3` size.
    pub fn scaled_to_nu(&self, nu: f64, n_cells: usize) -> Result<Self> {
        let cur = self.nu(n_cells)?;
        if cur == 0.0 {
            return if nu == 0.0 { Ok(self.clone()) } else { Err(Error::InvalidArgument("cannot rescale a zero perturbation".into())) };
        }
        let f = nu / cur;
        let modes = self.modes.iter().map(|m| Mode { amp_n: m.amp_n * f, amp_m: m.amp_m * f, ..*m }).collect();
        Self::new(self.period, modes)
    }
}

/// Grid `[0, period]` with `n_cells + 1` nodes, the last duplicating the first.
pub fn cell_grid(period: f64, n_cells: usize) -> Result<Grid1D> {
    Grid1D::new(0.0, period, n_cells + 1)
}

/// Distinct nodal values of one periodic state: the deviations `(rho, w, varphi)`
/// from the constant state, which are evolved, and the full fields they define.
#[derive(Debug, Clone, PartialEq)]
pub struct CellState {
    pub t: f64,
    pub rho: Vec<f64>,
    pub w: Vec<f64>,
    pub varphi: Vec<f64>,
    pub n: Vec<f64>,
    pub m: Vec<f64>,
    pub phi: Vec<f64>,
}

impl CellState {
    pub fn from_deviation(t: f64, base: &EndState, rho: Vec<f64>, w: Vec<f64>, varphi: Vec<f64>) -> Self {
        let n = rho.iter().map(|r| base.n_bar + r).collect();
        let m = w.iter().map(|q| base.m_bar + q).collect();
        let phi = varphi.iter().map(|p| base.phi_bar + p).collect();
        Self { t, rho, w, varphi, n, m, phi }
    }

    pub fn len(&self) -> usize {
        self.n.len()
    }

    pub fn is_empty(&self) -> bool {
        self.n.is_empty()
    }

    /// Value at node `j` of the periodic extension (any integer index).
    #[inline]
    pub fn at_index(values: &[f64], j: i64) -> f64 {
        values[j.rem_euclid(values.len() as i64) as usize]
    }

    /// Cubic Hermite interpolation of a periodic nodal sequence with spacing `h`.
    pub fn interpolate(values: &[f64], h: f64, x: f64) -> (f64, f64) {
        let len = values.len() as i64;
        let s = x / h;
        let j = s.floor();
        let t = s - j;
        let j = j as i64;
        let v = |i: i64| values[i.rem_euclid(len) as usize];
        let slope = |i: i64| (v(i + 1) - v(i - 1)) / (2.0 * h);
        hermite_cell(v(j), v(j + 1), slope(j), slope(j + 1), t, h)
    }
}

/// Stepper for one periodic cell, used directly for lock-step co-evolution.
#[derive(Debug, Clone)]
pub struct PeriodicCell {
    pub base: EndState,
    pub temperature: f64,
    pub period: f64,
    pub h: f64,
    pub state: CellState,
    pub poisson_tol: f64,
}

impl PeriodicCell {
    pub fn new(base: EndState, spec: &PerturbationSpec, temperature: f64, n_cells: usize) -> Result<Self> {
        if n_cells < 8 {
            return Err(Error::GridTooSmall { min: 8, got: n_cells });
        }
        let h = spec.period / n_cells as f64;
        let (rho, w) = spec.realize(n_cells);
        if let Some((i, r)) = rho.iter().enumerate().find(|(_, r)| !(base.n_bar + **r > 0.0)) {
            return Err(Error::PositivityLoss { x: i as f64 * h, n: base.n_bar + r, t: 0.0 });
        }
        let mut varphi: Vec<f64> = rho.iter().map(|r| -(r / base.n_bar).ln_1p()).collect();
        poisson::solve_periodic_deviation(&rho, base.n_bar, &mut varphi, h, POISSON_TOL)?;
        Ok(Self {
            base,
            temperature,
            period: spec.period,
            h,
            state: CellState::from_deviation(0.0, &base, rho, w, varphi),
            poisson_tol: POISSON_TOL,
        })
    }

    pub fn n_cells(&self) -> usize {
        self.state.n.len()
    }

    pub fn stable_dt(&self) -> f64 {
        scheme::stable_dt(&self.state.n, &self.state.m, self.temperature, self.h, 0.4, 0.25)
    }

    /// Semi-discrete time derivatives `(n_t, m_t)` of a state on this cell.
    pub fn time_derivative(&self, s: &CellState) -> (Vec<f64>, Vec<f64>) {
        self.view_of(s).time_derivative()
    }

    fn view_of<'a>(&self, s: &'a CellState) -> CellView<'a> {
        CellView { base: self.base, temperature: self.temperature, h: self.h, state: s }
    }

    fn finish(&self, t: f64, rho: Vec<f64>, w: Vec<f64>, mut varphi: Vec<f64>) -> Result<CellState> {
        if let Some((i, r)) = rho.iter().enumerate().find(|(_, r)| !(self.base.n_bar + **r > 0.0)) {
            return Err(Error::PositivityLoss { x: i as f64 * self.h, n: self.base.n_bar + r, t });
        }
        poisson::solve_periodic_deviation(&rho, self.base.n_bar, &mut varphi, self.h, self.poisson_tol)?;
        Ok(CellState::from_deviation(t, &self.base, rho, w, varphi))
    }

    fn euler(&self, s: &CellState, dt: f64) -> Result<CellState> {
        let (dn, dm) = self.time_derivative(s);
        let rho: Vec<f64> = s.rho.iter().zip(&dn).map(|(a, b)| a + dt * b).collect();
        let w: Vec<f64> = s.w.iter().zip(&dm).map(|(a, b)| a + dt * b).collect();
        self.finish(s.t + dt, rho, w, s.varphi.clone())
    }

    /// One SSP-RK2 step.
    pub fn step(&mut self, dt: f64) -> Result<()> {
        self.step_with_stage(dt).map(|_| ())
    }

    /// One SSP-RK2 step, returning the intermediate Euler stage (stamped `t + dt`).
    pub fn step_with_stage(&mut self, dt: f64) -> Result<CellState> {
        let s0 = &self.state;
        let s1 = self.euler(s0, dt)?;
        let s2 = self.euler(&s1, dt)?;
        let rho: Vec<f64> = s0.rho.iter().zip(&s2.rho).map(|(a, b)| 0.5 * (a + b)).collect();
        let w: Vec<f64> = s0.w.iter().zip(&s2.w).map(|(a, b)| 0.5 * (a + b)).collect();
        self.state = self.finish(s0.t + dt, rho, w, s2.varphi)?;
        Ok(s1)
    }

    pub fn fields(&self, s: &CellState) -> Result<[SpatialField; 3]> {
        let g = cell_grid(self.period, self.n_cells())?;
        Ok([
            SpatialField::periodic_from_cell(g, &s.n)?,
            SpatialField::periodic_from_cell(g, &s.m)?,
            SpatialField::periodic_from_cell(g, &s.phi)?,
        ])
    }

    /// Combined `H^1` norm of `(n - n_bar, m - m_bar, phi - phi_bar)`.
    pub fn perturbation_h1(&self, s: &CellState) -> Result<f64> {
        let g = cell_grid(self.period, self.n_cells())?;
        let f = |v: &[f64]| SpatialField::periodic_from_cell(g, v);
        combined_hk(&[&f(&s.rho)?, &f(&s.w)?, &f(&s.varphi)?], 1)
    }
}

/// Evolution controls. The step actually used divides `output_interval` exactly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolveOptions {
    pub n_cells: usize,
    pub output_interval: f64,
    pub transient: f64,
}

impl Default for EvolveOptions {
    fn default() -> Self {
        Self { n_cells: 256, output_interval: 0.05, transient: 1.0 }
    }
}

/// Least-squares decay rate of the `H^1` perturbation norm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaFit {
    pub alpha: f64,
    pub prefactor: f64,
    pub r_squared: f64,
    pub decades: f64,
    pub t_start: f64,
    pub t_stop: f64,
    /// `max_t h1(t) exp(alpha t) / nu` over the fit window.
    pub envelope_constant: f64,
}

#[derive(Debug, Clone)]
pub struct PeriodicHistory {
    pub base: EndState,
    pub temperature: f64,
    pub period: f64,
    pub spec: PerturbationSpec,
    pub times: Vec<f64>,
    pub snapshots: Vec<CellState>,
    pub h1: Vec<f64>,
    pub fitted_alpha: Option<AlphaFit>,
    pub nu: f64,
    pub dt: f64,
    pub transient: f64,
    cell: PeriodicCell,
}

impl PeriodicHistory {
    pub fn h(&self) -> f64 {
        self.cell.h
    }

    pub fn n_cells(&self) -> usize {
        self.cell.n_cells()
    }

    /// The stepper configuration (state at time zero).
    pub fn cell(&self) -> &PeriodicCell {
        &self.cell
    }

    /// Index of the snapshot at time `t`, which must coincide with an output time.
    pub fn index_at(&self, t: f64) -> Result<usize> {
        let start = self.times[0];
        let end = *self.times.last().expect("history is never empty");
        if t < start - 1e-9 || t > end + 1e-9 {
            return Err(Error::OutsideHistory { t, start, end });
        }
        let dt = if self.times.len() > 1 { self.times[1] - self.times[0] } else { 1.0 };
        let k = ((t - start) / dt).round() as usize;
        let k = k.min(self.times.len() - 1);
        if (self.times[k] - t).abs() > 1e-9 {
            return Err(Error::OutsideHistory { t, start, end });
        }
        Ok(k)
    }

    pub fn at(&self, t: f64) -> Result<&CellState> {
        Ok(&self.snapshots[self.index_at(t)?])
    }

    pub fn time_derivative(&self, s: &CellState) -> (Vec<f64>, Vec<f64>) {
        self.cell.time_derivative(s)
    }

    pub fn fields(&self, k: usize) -> Result<[SpatialField; 3]> {
        self.cell.fields(&self.snapshots[k])
    }

    /// Largest `|mean(n) - n_bar|`, `|mean(m) - m_bar|` over all snapshots.
    pub fn average_drift(&self) -> (f64, f64) {
        let mut d = (0.0_f64, 0.0_f64);
        for s in &self.snapshots {
            let len = s.rho.len() as f64;
            d.0 = d.0.max((s.rho.iter().sum::<f64>() / len).abs());
            d.1 = d.1.max((s.w.iter().sum::<f64>() / len).abs());
        }
        d
    }

    /// Largest Poisson-Boltzmann residual of a stored potential.
    pub fn max_poisson_residual(&self) -> f64 {
        self.snapshots
            .iter()
            .map(|s| poisson::periodic_residual(&s.n, &s.phi, self.cell.h).iter().fold(0.0_f64, |m, v| m.max(v.abs())))
            .fold(0.0, f64::max)
    }

    /// Largest relative increase `h1(t2) / h1(t1)` over `transient <= t1 < t2`.
    pub fn max_norm_growth(&self) -> f64 {
        let mut worst = 0.0_f64;
        let mut best_before = f64::INFINITY;
        for (t, v) in self.times.iter().zip(&self.h1) {
            if *t < self.transient {
                continue;
            }
            if best_before.is_finite() && best_before > 0.0 {
                worst = worst.max(v / best_before);
            }
            best_before = best_before.min(*v);
        }
        worst
    }
}

/// Evolves `base + spec` to `t_end` with a step no larger than `dt`.
pub fn evolve_periodic(
    base: EndState,
    spec: &PerturbationSpec,
    temperature: f64,
    t_end: f64,
    dt: f64,
    opts: &EvolveOptions,
) -> Result<PeriodicHistory> {
    if !(t_end > 0.0) || !(opts.output_interval > 0.0) {
        return Err(Error::InvalidArgument("end time and output interval must be positive".into()));
    }
    let mut cell = PeriodicCell::new(base, spec, temperature, opts.n_cells)?;
    let limit = cell.stable_dt();
    if !(dt > 0.0) || dt > limit * (1.0 + 1e-12) {
        return Err(Error::CflViolation { dt, limit });
    }
    let substeps = (opts.output_interval / dt).ceil().max(1.0) as usize;
    let dt = opts.output_interval / substeps as f64;
    let n_out = (t_end / opts.output_interval).round() as usize;
    let nu = spec.nu(opts.n_cells)?;
    let initial = cell.clone();
    let h1_0 = cell.perturbation_h1(&cell.state)?;
    let bound = 10.0 * h1_0 + 1e-10;
    let mut times = vec![0.0];
    let mut snapshots = vec![cell.state.clone()];
    let mut h1 = vec![h1_0];
    for k in 1..=n_out {
        for _ in 0..substeps {
            cell.step(dt)?;
        }
        cell.state.t = k as f64 * opts.output_interval;
        let norm = cell.perturbation_h1(&cell.state)?;
        if !norm.is_finite() || norm > bound {
            return Err(Error::BlowUp { t: cell.state.t, norm, bound });
        }
        times.push(cell.state.t);
        snapshots.push(cell.state.clone());
        h1.push(norm);
    }
    let mut hist = PeriodicHistory {
        base,
        temperature,
        period: spec.period,
        spec: spec.clone(),
        times,
        snapshots,
        h1,
        fitted_alpha: None,
        nu,
        dt,
        transient: opts.transient,
        cell: initial,
    };
    hist.fitted_alpha = fit_alpha(&hist).ok();
    Ok(hist)
}

/// Samples below this multiple of the initial norm are treated as round-off.
const FIT_FLOOR: f64 = 1e-9;

/// Exponential decay rate of the `H^1` perturbation norm after the transient.
pub fn fit_alpha(history: &PeriodicHistory) -> Result<AlphaFit> {
    let h0 = history.h1[0];
    if !(h0 > 0.0) {
        return Err(Error::FitRejected("perturbation norm is identically zero".into()));
    }
    let floor = FIT_FLOOR * h0;
    let (t, y): (Vec<f64>, Vec<f64>) = history
        .times
        .iter()
        .zip(&history.h1)
        .filter(|(t, v)| **t >= history.transient && **v > floor)
        .map(|(t, v)| (*t, *v))
        .unzip();
    if t.len() < 10 {
        return Err(Error::FitRejected(format!("only {} usable samples", t.len())));
    }
    let f = fit_exponential_decay(&t, &y)?;
    if f.decades < 2.0 {
        return Err(Error::FitRejected(format!("norm spans only {:.2} decades", f.decades)));
    }
    if !(f.rate > 0.0) {
        return Err(Error::FitRejected(format!("nonpositive decay rate {}", f.rate)));
    }
    let nu = if history.nu > 0.0 { history.nu } else { h0 };
    let envelope_constant = t.iter().zip(&y).map(|(t, v)| v * (f.rate * t).exp() / nu).fold(0.0, f64::max);
    Ok(AlphaFit {
        alpha: f.rate,
        prefactor: f.prefactor,
        r_squared: f.r_squared,
        decades: f.decades,
        t_start: t[0],
        t_stop: *t.last().unwrap(),
        envelope_constant,
    })
}

/// Periodic extension of the snapshot field `values` on a line grid aligned with the cell.
pub fn extend_to_line(values: &[f64], h: f64, grid: &Grid1D) -> Result<SpatialField> {
    let v: Vec<f64> = grid.points().iter().map(|x| CellState::interpolate(values, h, *x).0).collect();
    SpatialField::new(*grid, v, BoundaryKind::Line)
}

/// Borrowed periodic state with the constants needed to differentiate it in time.
#[derive(Debug, Clone, Copy)]
pub struct CellView<'a> {
    pub base: EndState,
    pub temperature: f64,
    pub h: f64,
    pub state: &'a CellState,
}

/// A periodic cell sampled on the nodes of a line grid.
#[derive(Debug, Clone)]
pub struct LineExtension {
    /// Perturbations `n - n_bar`, `m - m_bar`, `u - u_bar`, `phi - phi_bar`.
    pub rho: Vec<f64>,
    pub w: Vec<f64>,
    pub v: Vec<f64>,
    pub varphi: Vec<f64>,
    /// Central differences `w_x`, `v_x`, `varphi_x` and `varphi_xx = rho - n_bar expm1(-varphi)`.
    pub w_x: Vec<f64>,
    pub v_x: Vec<f64>,
    pub varphi_x: Vec<f64>,
    pub varphi_xx: Vec<f64>,
    /// Semi-discrete time derivatives of `rho`, `w` and `v`.
    pub rho_t: Vec<f64>,
    pub w_t: Vec<f64>,
    pub v_t: Vec<f64>,
}

impl<'a> CellView<'a> {
    pub fn time_derivative(&self) -> (Vec<f64>, Vec<f64>) {
        let s = self.state;
        let mut dn = vec![0.0; s.rho.len()];
        let mut dm = vec![0.0; s.rho.len()];
        let b = &self.base;
        scheme::rhs_periodic_deviation(self.temperature, self.h, b.n_bar, b.m_bar, &s.rho, &s.w, &s.varphi, &mut dn, &mut dm);
        (dn, dm)
    }

    /// Samples on `grid`; exact index arithmetic when the grids align, cubic interpolation otherwise.
    pub fn extend(&self, grid: &Grid1D) -> LineExtension {
        let s = self.state;
        let b = self.base;
        let (dn, dm) = self.time_derivative();
        let (rho, w, varphi) = (&s.rho, &s.w, &s.varphi);
        let v: Vec<f64> = rho.iter().zip(w).map(|(r, q)| (q * b.n_bar - b.m_bar * r) / (b.n_bar * (b.n_bar + r))).collect();
        let v_t: Vec<f64> = (0..s.n.len()).map(|i| (dm[i] * s.n[i] - s.m[i] * dn[i]) / (s.n[i] * s.n[i])).collect();
        let d1 = |f: &[f64]| -> Vec<f64> {
            let len = f.len() as i64;
            (0..len).map(|j| (CellState::at_index(f, j + 1) - CellState::at_index(f, j - 1)) / (2.0 * self.h)).collect()
        };
        let w_x = d1(w);
        let v_x = d1(&v);
        let varphi_x = d1(varphi);
        let varphi_xx: Vec<f64> = rho.iter().zip(varphi).map(|(r, p)| r - b.n_bar * (-p).exp_m1()).collect();
        let sample: Box<dyn Fn(&[f64]) -> Vec<f64>> = match aligned_indices(grid, self.h, s.n.len()) {
            Some(idx) => Box::new(move |f: &[f64]| idx.iter().map(|&j| f[j]).collect()),
            None => {
                let pts = grid.points();
                let h = self.h;
                Box::new(move |f: &[f64]| pts.iter().map(|x| CellState::interpolate(f, h, *x).0).collect())
            }
        };
        LineExtension {
            rho: sample(rho),
            w: sample(w),
            v: sample(&v),
            varphi: sample(varphi),
            w_x: sample(&w_x),
            v_x: sample(&v_x),
            varphi_x: sample(&varphi_x),
            varphi_xx: sample(&varphi_xx),
            rho_t: sample(&dn),
            w_t: sample(&dm),
            v_t: sample(&v_t),
        }
    }
}

/// Cell index of every line node when the line spacing equals the cell spacing and
/// the nodes fall on the cell lattice.
pub fn aligned_indices(grid: &Grid1D, h_cell: f64, n_cells: usize) -> Option<Vec<usize>> {
    let h = grid.spacing();
    if ((h - h_cell) / h_cell).abs() > 1e-10 {
        return None;
    }
    let s = grid.x_min() / h_cell;
    if (s - s.round()).abs() > 1e-6 {
        return None;
    }
    let j0 = s.round() as i64;
    Some((0..grid.n_points()).map(|i| (j0 + i as i64).rem_euclid(n_cells as i64) as usize).collect())
}

impl PeriodicHistory {
    pub fn view(&self, k: usize) -> CellView<'_> {
        CellView { base: self.base, temperature: self.temperature, h: self.h(), state: &self.snapshots[k] }
    }
}

impl PeriodicCell {
    pub fn view(&self) -> CellView<'_> {
        CellView { base: self.base, temperature: self.temperature, h: self.h, state: &self.state }
    }
}
