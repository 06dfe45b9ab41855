//! Shift curves `X(t)`, `Y(t)` of the perturbed shock ansatz.
//!
//! The shifts keep the total mass and momentum of the perturbation zero. Their
//! initial values solve a scalar equation each, they evolve by an ODE driven by
//! the periodic solutions, and their limits have closed forms in terms of the
//! initial data and a time integral of the periodic cell averages.

use crate::error::{Error, Result};
use crate::numerics::{BoundaryKind, SpatialField};
use crate::periodic::{CellState, PeriodicHistory, PerturbationSpec};
use crate::profile::ShockProfile;

/// Half-line integrals of the initial data minus profile minus periodic far field.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct MassLedger {
    pub int_n_left: f64,
    pub int_n_right: f64,
    pub int_m_left: f64,
    pub int_m_right: f64,
}

impl MassLedger {
    pub fn n_total(&self) -> f64 {
        self.int_n_left + self.int_n_right
    }

    pub fn m_total(&self) -> f64 {
        self.int_m_left + self.int_m_right
    }

    /// Localized masses only (no periodic data), placed on the right half-line.
    pub fn localized(mass_n: f64, mass_m: f64) -> Self {
        Self { int_n_left: 0.0, int_n_right: mass_n, int_m_left: 0.0, int_m_right: mass_m }
    }

    /// Integrates `n0 - n^s - rho0^-` over `x < 0` and `n0 - n^s - rho0^+` over `x > 0`, same for `m0`.
    ///
    /// `n0 - n^s` is integrated by the plain trapezoid rule through the origin, so that
    /// localized data is measured exactly as the line diagnostics measure it, with
    /// end corrections at `+-L` only; the one-sided periodic pieces, which have a kink
    /// at the origin, use an end-corrected rule on each half.
    pub fn from_line_data(
        n0: &SpatialField,
        m0: &SpatialField,
        profile: &ShockProfile,
        minus: &PerturbationSpec,
        plus: &PerturbationSpec,
    ) -> Result<Self> {
        let g = *n0.grid();
        if g.x_min() >= 0.0 || g.x_max() <= 0.0 {
            return Err(Error::InvalidArgument("line grid must contain the origin".into()));
        }
        let zero = g.nearest(0.0);
        if g.point(zero).abs() > 1e-9 * g.spacing() {
            return Err(Error::InvalidArgument("line grid must have a node at the origin".into()));
        }
        let h = g.spacing();
        let xs = g.points();
        let samples: Vec<_> = xs.iter().map(|x| profile.sample(*x).jet).collect();
        let dn: Vec<f64> = n0.values().iter().zip(&samples).map(|(v, q)| v - q.n).collect();
        let dm: Vec<f64> = m0.values().iter().zip(&samples).map(|(v, q)| v - q.m).collect();
        let halves = |d: &[f64], f: &dyn Fn(&PerturbationSpec, f64) -> f64| -> (f64, f64) {
            let left: Vec<f64> = xs[..=zero].iter().map(|x| f(minus, *x)).collect();
            let right: Vec<f64> = xs[zero..].iter().map(|x| f(plus, *x)).collect();
            (
                trapezoid_with_left_correction(&d[..=zero], h) - end_corrected_trapezoid(&left, h),
                trapezoid_with_right_correction(&d[zero..], h) - end_corrected_trapezoid(&right, h),
            )
        };
        let (int_n_left, int_n_right) = halves(&dn, &|s, x| s.rho(x));
        let (int_m_left, int_m_right) = halves(&dm, &|s, x| s.w(x));
        Ok(Self { int_n_left, int_n_right, int_m_left, int_m_right })
    }
}

fn plain_trapezoid(f: &[f64], h: f64) -> f64 {
    let n = f.len();
    h * (0.5 * (f[0] + f[n - 1]) + f[1..n - 1].iter().sum::<f64>())
}

fn left_slope(f: &[f64], h: f64) -> f64 {
    (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h)
}

fn right_slope(f: &[f64], h: f64) -> f64 {
    let n = f.len();
    (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * h)
}

fn trapezoid_with_left_correction(f: &[f64], h: f64) -> f64 {
    plain_trapezoid(f, h) + h * h / 12.0 * left_slope(f, h)
}

fn trapezoid_with_right_correction(f: &[f64], h: f64) -> f64 {
    plain_trapezoid(f, h) - h * h / 12.0 * right_slope(f, h)
}

/// Trapezoid rule with the `h^2/12 (f'(b) - f'(a))` Euler-Maclaurin term removed,
/// using one-sided second-order slopes at the ends.
fn end_corrected_trapezoid(f: &[f64], h: f64) -> f64 {
    plain_trapezoid(f, h) - h * h / 12.0 * (right_slope(f, h) - left_slope(f, h))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShiftState {
    pub t: f64,
    pub x: f64,
    pub y: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Component {
    Density,
    Momentum,
}

/// `int_0^x (f^+ - f^-)` for the density or momentum part of the periodic data.
fn jump_antiderivative(minus: &PerturbationSpec, plus: &PerturbationSpec, c: Component, x: f64) -> f64 {
    let side = |spec: &PerturbationSpec| -> f64 {
        spec.modes
            .iter()
            .map(|m| {
                let k = 2.0 * std::f64::consts::PI * m.k as f64 / spec.period;
                let (a, p) = match c {
                    Component::Density => (m.amp_n, m.phase_n),
                    Component::Momentum => (m.amp_m, m.phase_m),
                };
                a * ((k * x + p).sin() - p.sin()) / k
            })
            .sum()
    };
    side(plus) - side(minus)
}

fn jump_value(minus: &PerturbationSpec, plus: &PerturbationSpec, c: Component, x: f64) -> f64 {
    match c {
        Component::Density => plus.rho(x) - minus.rho(x),
        Component::Momentum => plus.w(x) - minus.w(x),
    }
}

/// Trapezoid weights times `sigma'` on the profile grid.
fn sigma_prime_weights(profile: &ShockProfile) -> Vec<(f64, f64)> {
    let g = profile.xi_grid;
    let h = g.spacing();
    let jump = profile.connection.jump_n();
    let d = profile.dn_s.values();
    let peak = d.iter().fold(0.0_f64, |m, v| m.max((v / jump).abs()));
    let last = g.n_points() - 1;
    (0..=last)
        .filter_map(|i| {
            let sp = d[i] / jump;
            if sp.abs() < 1e-12 * peak {
                return None;
            }
            let w = if i == 0 || i == last { 0.5 * h } else { h };
            Some((g.point(i), w * sp))
        })
        .collect()
}

fn functional(profile: &ShockProfile, minus: &PerturbationSpec, plus: &PerturbationSpec, c: Component, x0: f64) -> (f64, f64) {
    let jump = match c {
        Component::Density => profile.connection.jump_n(),
        Component::Momentum => profile.connection.jump_m(),
    };
    let mut val = 0.0;
    let mut der = 0.0;
    for (xi, w) in sigma_prime_weights(profile) {
        val += w * jump_antiderivative(minus, plus, c, xi + x0);
        der += w * jump_value(minus, plus, c, xi + x0);
    }
    (x0 + val / jump, 1.0 + der / jump)
}

/// The density functional `A_1(X_0)` and its derivative.
pub fn density_functional(profile: &ShockProfile, minus: &PerturbationSpec, plus: &PerturbationSpec, x0: f64) -> (f64, f64) {
    functional(profile, minus, plus, Component::Density, x0)
}

/// The momentum functional `A_2(Y_0)` and its derivative.
pub fn momentum_functional(profile: &ShockProfile, minus: &PerturbationSpec, plus: &PerturbationSpec, y0: f64) -> (f64, f64) {
    functional(profile, minus, plus, Component::Momentum, y0)
}

fn newton_scalar(f: impl Fn(f64) -> (f64, f64), target: f64) -> Result<f64> {
    let mut x = target;
    let mut r = f64::INFINITY;
    for _ in 0..50 {
        let (v, d) = f(x);
        if (d - 1.0).abs() >= 1.0 {
            return Err(Error::Smallness(format!("shift functional derivative {d} leaves (0, 2): periodic data too large")));
        }
        r = v - target;
        let step = r / d;
        x -= step;
        if step.abs() <= 1e-14 * (1.0 + x.abs()) {
            return Ok(x);
        }
    }
    Err(Error::NoConvergence { solver: "initial shift Newton", iterations: 50, residual: r })
}

/// `(X_0, Y_0)` solving `A_1(X_0) = -ledger_n / [n]` and `A_2(Y_0) = -ledger_m / [m]`.
pub fn initial_shifts(
    ledger: &MassLedger,
    minus: &PerturbationSpec,
    plus: &PerturbationSpec,
    profile: &ShockProfile,
) -> Result<(f64, f64)> {
    let c = &profile.connection;
    let x0 = newton_scalar(|x| density_functional(profile, minus, plus, x), -ledger.n_total() / c.jump_n())?;
    let y0 = newton_scalar(|y| momentum_functional(profile, minus, plus, y), -ledger.m_total() / c.jump_m())?;
    Ok((x0, y0))
}

/// Brute-force root location of `f(x) = target` on `[lo, hi]`: coarse scan, then a
/// scan of the bracketing cell at `resolution`. Returns the midpoint of the final cell.
pub fn scan_root(f: impl Fn(f64) -> f64, target: f64, lo: f64, hi: f64, resolution: f64) -> Result<f64> {
    let coarse = (resolution * 100.0).min(hi - lo);
    let bracket = |a: f64, b: f64, step: f64| -> Option<(f64, f64)> {
        let n = ((b - a) / step).ceil() as usize;
        let mut x0 = a;
        let mut g0 = f(a) - target;
        for i in 1..=n {
            let x1 = (a + i as f64 * step).min(b);
            let g1 = f(x1) - target;
            if g0 == 0.0 || g0.signum() != g1.signum() {
                return Some((x0, x1));
            }
            x0 = x1;
            g0 = g1;
        }
        None
    };
    let (a, b) = bracket(lo, hi, coarse).ok_or_else(|| Error::InvalidArgument(format!("no root in [{lo}, {hi}]")))?;
    let (a, b) = bracket(a, b, resolution).expect("bracket found at coarse level");
    Ok(0.5 * (a + b))
}

/// Cell quantities needed by the shift equations at one snapshot.
struct CellJumpData<'a> {
    state: &'a CellState,
    flux: Vec<f64>,
    h: f64,
}

fn momentum_bracket(state: &CellState, h: f64, temperature: f64) -> Vec<f64> {
    let len = state.n.len();
    let u: Vec<f64> = state.m.iter().zip(&state.n).map(|(m, n)| m / n).collect();
    let at = |v: &[f64], j: i64| CellState::at_index(v, j);
    (0..len as i64)
        .map(|i| {
            let iu = i as usize;
            let ux = (at(&u, i + 1) - at(&u, i - 1)) / (2.0 * h);
            let px = (at(&state.phi, i + 1) - at(&state.phi, i - 1)) / (2.0 * h);
            let pxx = (at(&state.phi, i + 1) - 2.0 * state.phi[iu] + at(&state.phi, i - 1)) / (h * h);
            state.m[iu] * u[iu] + (temperature + 1.0) * state.n[iu] - ux - 0.5 * px * px - pxx
        })
        .collect()
}

#[derive(Clone, Copy)]
enum Quantity {
    Density,
    Momentum,
    Flux,
}

impl<'a> CellJumpData<'a> {
    fn field(&self, q: Quantity) -> &[f64] {
        match q {
            Quantity::Density => &self.state.n,
            Quantity::Momentum => &self.state.m,
            Quantity::Flux => &self.flux,
        }
    }

    fn new(hist: &'a PeriodicHistory, t: f64) -> Result<Self> {
        let state = hist.at(t)?;
        let h = hist.h();
        Ok(Self { state, flux: momentum_bracket(state, h, hist.temperature), h })
    }
}

/// `(X', Y')` at time `t`.
pub fn shift_rhs(
    t: f64,
    state: &ShiftState,
    minus: &PeriodicHistory,
    plus: &PeriodicHistory,
    profile: &ShockProfile,
) -> Result<(f64, f64)> {
    let lm = CellJumpData::new(minus, t)?;
    let lp = CellJumpData::new(plus, t)?;
    let s = profile.speed();
    let jump = |x: f64, which: Quantity| -> f64 {
        CellState::interpolate(lp.field(which), lp.h, x).0 - CellState::interpolate(lm.field(which), lm.h, x).0
    };
    let weights = sigma_prime_weights(profile);
    let (mut num_x, mut den_x, mut num_y, mut den_y) = (0.0, 0.0, 0.0, 0.0);
    for (xi, w) in &weights {
        let xx = xi + s * t + state.x;
        num_x += w * jump(xx, Quantity::Momentum);
        den_x += w * jump(xx, Quantity::Density);
        let xy = xi + s * t + state.y;
        num_y += w * jump(xy, Quantity::Flux);
        den_y += w * jump(xy, Quantity::Momentum);
    }
    let c = &profile.connection;
    if den_x.abs() < 1e-3 * c.jump_n().abs() {
        return Err(Error::InvalidArgument(format!("density shift denominator {den_x:e} is near zero")));
    }
    if den_y.abs() < 1e-3 * c.jump_m().abs() {
        return Err(Error::InvalidArgument(format!("momentum shift denominator {den_y:e} is near zero")));
    }
    Ok((-s + num_x / den_x, -s + num_y / den_y))
}

/// Controls for [`integrate_shifts_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShiftOptions {
    /// RK4 step in snapshot intervals; must be even so the midpoint is a snapshot.
    pub stride: usize,
    /// Largest admissible `max(|X'|, |Y'|)(T) / alpha` at the final time.
    pub tail_tol: f64,
}

impl Default for ShiftOptions {
    fn default() -> Self {
        Self { stride: 2, tail_tol: 1e-6 }
    }
}

#[derive(Debug, Clone)]
pub struct ShiftTrajectory {
    pub states: Vec<ShiftState>,
    pub x_prime: Vec<f64>,
    pub y_prime: Vec<f64>,
    pub step: f64,
    pub tail_estimate: f64,
}

impl ShiftTrajectory {
    pub fn terminal(&self) -> ShiftState {
        *self.states.last().expect("trajectory is never empty")
    }

    /// `(X, Y)` at a trajectory time, by cubic Hermite interpolation between steps.
    pub fn at(&self, t: f64) -> (f64, f64) {
        let t0 = self.states[0].t;
        let last = self.states.len() - 1;
        let s = ((t - t0) / self.step).clamp(0.0, last as f64);
        let i = (s.floor() as usize).min(last.saturating_sub(1));
        if last == 0 {
            return (self.states[0].x, self.states[0].y);
        }
        let u = s - i as f64;
        let h = self.step;
        let x = crate::numerics::hermite_cell(self.states[i].x, self.states[i + 1].x, self.x_prime[i], self.x_prime[i + 1], u, h).0;
        let y = crate::numerics::hermite_cell(self.states[i].y, self.states[i + 1].y, self.y_prime[i], self.y_prime[i + 1], u, h).0;
        (x, y)
    }
}

pub fn integrate_shifts(
    x0: f64,
    y0: f64,
    minus: &PeriodicHistory,
    plus: &PeriodicHistory,
    profile: &ShockProfile,
    t_end: f64,
) -> Result<ShiftTrajectory> {
    integrate_shifts_with(x0, y0, minus, plus, profile, t_end, &ShiftOptions::default())
}

/// Classical RK4 on the snapshot lattice of the two histories.
pub fn integrate_shifts_with(
    x0: f64,
    y0: f64,
    minus: &PeriodicHistory,
    plus: &PeriodicHistory,
    profile: &ShockProfile,
    t_end: f64,
    opts: &ShiftOptions,
) -> Result<ShiftTrajectory> {
    if opts.stride == 0 || opts.stride % 2 != 0 {
        return Err(Error::InvalidArgument(format!("RK4 stride must be a positive even number, got {}", opts.stride)));
    }
    if minus.times.len() < 2 || minus.times != plus.times {
        return Err(Error::InvalidArgument("shift integration needs two histories on the same time lattice".into()));
    }
    let dt_snap = minus.times[1] - minus.times[0];
    let step = dt_snap * opts.stride as f64;
    let n_steps = (t_end / step).round() as usize;
    if ((n_steps as f64) * step - t_end).abs() > 1e-9 {
        return Err(Error::InvalidArgument(format!("end time {t_end} is not a multiple of the RK4 step {step}")));
    }
    let f = |t: f64, x: f64, y: f64| shift_rhs(t, &ShiftState { t, x, y }, minus, plus, profile);
    let mut st = ShiftState { t: 0.0, x: x0, y: y0 };
    let (mut xp, mut yp) = f(0.0, x0, y0)?;
    let mut states = vec![st];
    let mut x_prime = vec![xp];
    let mut y_prime = vec![yp];
    for k in 0..n_steps {
        let t = k as f64 * step;
        let (k1x, k1y) = (xp, yp);
        let (k2x, k2y) = f(t + 0.5 * step, st.x + 0.5 * step * k1x, st.y + 0.5 * step * k1y)?;
        let (k3x, k3y) = f(t + 0.5 * step, st.x + 0.5 * step * k2x, st.y + 0.5 * step * k2y)?;
        let (k4x, k4y) = f(t + step, st.x + step * k3x, st.y + step * k3y)?;
        st = ShiftState {
            t: (k + 1) as f64 * step,
            x: st.x + step / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x),
            y: st.y + step / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y),
        };
        (xp, yp) = f(st.t, st.x, st.y)?;
        states.push(st);
        x_prime.push(xp);
        y_prime.push(yp);
    }
    let alpha = [minus.fitted_alpha, plus.fitted_alpha]
        .iter()
        .flatten()
        .map(|a| a.alpha)
        .fold(f64::INFINITY, f64::min);
    let rate = if alpha.is_finite() { alpha } else { 1.0 };
    let tail_estimate = xp.abs().max(yp.abs()) / rate;
    if tail_estimate > opts.tail_tol {
        return Err(Error::NoConvergence { solver: "shift ODE", iterations: n_steps, residual: tail_estimate });
    }
    Ok(ShiftTrajectory { states, x_prime, y_prime, step, tail_estimate })
}

/// Time integral over `[0, inf)` of the jump of the cell-averaged momentum flux deviation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeIntegral {
    pub value: f64,
    /// Bound on the neglected part beyond the last snapshot.
    pub tail_bound: f64,
    /// Difference between the trapezoid sums on the full and the every-other lattice.
    pub quadrature_estimate: f64,
}

/// Cell average of `m^2/n + (A+1) n - (phi_x)^2 / 2` minus its constant-state value.
pub fn averaged_flux_deviation(hist: &PeriodicHistory, k: usize) -> f64 {
    let s = &hist.snapshots[k];
    let h = hist.h();
    let a1 = hist.temperature + 1.0;
    let len = s.n.len();
    let mut sum = 0.0;
    for i in 0..len {
        let e = (CellState::at_index(&s.phi, i as i64 + 1) - s.phi[i]) / h;
        sum += s.m[i] * s.m[i] / s.n[i] + a1 * s.n[i] - 0.5 * e * e;
    }
    let b = hist.base;
    sum / len as f64 - (b.m_bar * b.m_bar / b.n_bar + a1 * b.n_bar)
}

pub fn time_integral(minus: &PeriodicHistory, plus: &PeriodicHistory) -> Result<TimeIntegral> {
    if minus.times != plus.times || minus.times.len() < 3 {
        return Err(Error::InvalidArgument("time integral needs two histories on the same lattice".into()));
    }
    let g: Vec<f64> = (0..minus.times.len())
        .map(|k| averaged_flux_deviation(plus, k) - averaged_flux_deviation(minus, k))
        .collect();
    let dt = minus.times[1] - minus.times[0];
    let trap = |stride: usize| -> f64 {
        let idx: Vec<usize> = (0..g.len()).step_by(stride).collect();
        let h = dt * stride as f64;
        idx.windows(2).map(|w| 0.5 * h * (g[w[0]] + g[w[1]])).sum()
    };
    let fine = trap(1);
    let coarse = trap(2);
    let last = g.len() - 1;
    let tail_level = g[last.saturating_sub(20)..].iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    if tail_level > 1e-10 {
        return Err(Error::NoConvergence { solver: "flux time integral", iterations: g.len(), residual: tail_level });
    }
    let alpha = [minus.fitted_alpha, plus.fitted_alpha]
        .iter()
        .flatten()
        .map(|a| a.alpha)
        .fold(f64::INFINITY, f64::min);
    let rate = if alpha.is_finite() { alpha } else { 1.0 };
    Ok(TimeIntegral { value: fine, tail_bound: tail_level / rate, quadrature_estimate: (fine - coarse).abs() })
}

/// Closed-form limits of the shift curves.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticShifts {
    pub x_inf: f64,
    pub y_inf: f64,
    /// Momentum-normalized imbalance; zero exactly when `x_inf == y_inf`.
    pub zero_mass_residual: f64,
    pub time_integral: TimeIntegral,
}

/// `[R]` for density and momentum, `R = (1/pi) int_0^pi int_0^x f` of the initial periodic data.
pub fn mean_antiderivative_jumps(minus: &PerturbationSpec, plus: &PerturbationSpec) -> (f64, f64) {
    let a = minus.mean_antiderivatives();
    let b = plus.mean_antiderivatives();
    (b.0 - a.0, b.1 - a.1)
}

pub fn asymptotic_shifts(
    x0: f64,
    y0: f64,
    minus: &PeriodicHistory,
    plus: &PeriodicHistory,
    profile: &ShockProfile,
) -> Result<AsymptoticShifts> {
    let c = &profile.connection;
    let ti = time_integral(minus, plus)?;
    let (rr, rw) = mean_antiderivative_jumps(&minus.spec, &plus.spec);
    let a1 = density_functional(profile, &minus.spec, &plus.spec, x0).0;
    let a2 = momentum_functional(profile, &minus.spec, &plus.spec, y0).0;
    let x_inf = a1 - rr / c.jump_n();
    let y_inf = a2 - rw / c.jump_m() + ti.value / c.jump_m();
    Ok(AsymptoticShifts { x_inf, y_inf, zero_mass_residual: c.jump_m() * (y_inf - x_inf), time_integral: ti })
}

/// `s (ledger_n + [R rho]) - (ledger_m + [R w] - T)`; vanishes exactly when the limits coincide.
pub fn zero_mass_residual(ledger: &MassLedger, minus: &PerturbationSpec, plus: &PerturbationSpec, speed: f64, time_integral: f64) -> f64 {
    let (rr, rw) = mean_antiderivative_jumps(minus, plus);
    speed * (ledger.n_total() + rr) - (ledger.m_total() + rw - time_integral)
}

/// Result of [`enforce_zero_mass`].
#[derive(Debug, Clone)]
pub struct ZeroMassCorrection {
    pub m0: SpatialField,
    pub amplitude: f64,
    pub residual_before: f64,
    pub residual_after: f64,
    pub ledger: MassLedger,
    pub x0: f64,
    pub y0: f64,
    pub asymptotic: AsymptoticShifts,
}

/// Largest bump amplitude accepted by [`enforce_zero_mass`].
pub const MAX_BUMP: f64 = 0.1;

/// `cos^2(pi x / 4)` on `|x| <= 2`, zero elsewhere.
pub fn bump(x: f64) -> f64 {
    if x.abs() <= 2.0 {
        (std::f64::consts::PI * x / 4.0).cos().powi(2)
    } else {
        0.0
    }
}

/// Adds `a * bump` to `m0` so that the zero-mass residual vanishes, then re-solves the shifts.
pub fn enforce_zero_mass(
    n0: &SpatialField,
    m0: &SpatialField,
    profile: &ShockProfile,
    minus: &PeriodicHistory,
    plus: &PeriodicHistory,
) -> Result<ZeroMassCorrection> {
    let s = profile.speed();
    let ti = time_integral(minus, plus)?;
    let ledger = MassLedger::from_line_data(n0, m0, profile, &minus.spec, &plus.spec)?;
    let r0 = zero_mass_residual(&ledger, &minus.spec, &plus.spec, s, ti.value);
    let b = SpatialField::from_fn(*m0.grid(), BoundaryKind::Line, bump)?;
    let g = m0.grid();
    let ib = b.integrate(g.x_min(), 0.0)? + b.integrate(0.0, g.x_max())?;
    let a = r0 / ib;
    if a.abs() > MAX_BUMP {
        return Err(Error::Smallness(format!("zero-mass bump amplitude {a:e} exceeds {MAX_BUMP}")));
    }
    let m1 = if a == 0.0 { m0.clone() } else { m0.linear_combination(1.0, &b, a)? };
    let ledger = MassLedger::from_line_data(n0, &m1, profile, &minus.spec, &plus.spec)?;
    let r1 = zero_mass_residual(&ledger, &minus.spec, &plus.spec, s, ti.value);
    let (x0, y0) = initial_shifts(&ledger, &minus.spec, &plus.spec, profile)?;
    let asymptotic = asymptotic_shifts(x0, y0, minus, plus, profile)?;
    Ok(ZeroMassCorrection { m0: m1, amplitude: a, residual_before: r0, residual_after: r1, ledger, x0, y0, asymptotic })
}
