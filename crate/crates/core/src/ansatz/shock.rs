//! Shock ansatz `n# = n^s_X + rho^-(1 - sigma_X) + rho^+ sigma_X` (and its
//! momentum and potential analogues) with its residuals.
//!
//! The residuals are assembled from the profile jets and the periodic fields,
//! using the equations the periodic solutions satisfy to eliminate their time
//! derivatives and second potential derivatives. Every remaining term carries
//! a weight factor `sigma'` or `sigma_X - sigma_Y`, so the far field cancels
//! exactly and no rounding noise is amplified by the difference operators.

use super::{common_time, convective_increment, line_field, velocity_increment, AnsatzFields, ErrorTerms};
use crate::error::Result;
use crate::numerics::{BoundaryKind, Grid1D, SpatialField};
use crate::periodic::{CellView, LineExtension};
use crate::profile::{ProfileSample, ShockProfile};
use crate::riemann::EndState;
use crate::shifts::{shift_rhs, ShiftTrajectory};
use crate::periodic::PeriodicHistory;

/// Shift values and their time derivatives at one time.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ShiftSample {
    pub x: f64,
    pub y: f64,
    pub x_prime: f64,
    pub y_prime: f64,
}

impl ShiftSample {
    pub fn fixed(x: f64, y: f64) -> Self {
        Self { x, y, x_prime: 0.0, y_prime: 0.0 }
    }

    /// Shifts from a trajectory at snapshot `k` of the histories, with derivatives from the shift equations.
    pub fn from_trajectory(
        trajectory: &ShiftTrajectory,
        minus: &PeriodicHistory,
        plus: &PeriodicHistory,
        profile: &ShockProfile,
        k: usize,
    ) -> Result<Self> {
        let t = minus.times[k];
        let (x, y) = trajectory.at(t);
        let state = crate::shifts::ShiftState { t, x, y };
        let (x_prime, y_prime) = shift_rhs(t, &state, minus, plus, profile)?;
        Ok(Self { x, y, x_prime, y_prime })
    }
}

/// Everything evaluated pointwise on the line.
pub(crate) struct ShockLocal {
    pub t: f64,
    pub sx: Vec<ProfileSample>,
    pub sy: Vec<ProfileSample>,
    pub lm: LineExtension,
    pub lp: LineExtension,
    pub base_m: EndState,
    pub base_p: EndState,
}

impl ShockLocal {
    pub fn new(grid: &Grid1D, profile: &ShockProfile, minus: &CellView, plus: &CellView, x: f64, y: f64) -> Result<Self> {
        let t = common_time(minus, plus)?;
        let s = profile.speed();
        let pts = grid.points();
        Ok(Self {
            t,
            sx: pts.iter().map(|p| profile.sample(p - s * t - x)).collect(),
            sy: pts.iter().map(|p| profile.sample(p - s * t - y)).collect(),
            lm: minus.extend(grid),
            lp: plus.extend(grid),
            base_m: minus.base,
            base_p: plus.base,
        })
    }

    pub fn len(&self) -> usize {
        self.sx.len()
    }

    /// Blends `(a, b, c)` of the density, momentum and potential perturbations at node `i`.
    pub fn blends(&self, i: usize) -> (f64, f64, f64) {
        let (gx, gy) = (self.sx[i].sigma, self.sy[i].sigma);
        let (m, p) = (&self.lm, &self.lp);
        (
            m.rho[i] * (1.0 - gx) + p.rho[i] * gx,
            m.w[i] * (1.0 - gy) + p.w[i] * gy,
            m.varphi[i] * (1.0 - gx) + p.varphi[i] * gx,
        )
    }
}

/// Shock ansatz at the common time of the two periodic states.
pub fn build_shock_ansatz(
    grid: &Grid1D,
    profile: &ShockProfile,
    minus: &CellView,
    plus: &CellView,
    x: f64,
    y: f64,
) -> Result<AnsatzFields> {
    let loc = ShockLocal::new(grid, profile, minus, plus, x, y)?;
    let len = loc.len();
    let (mut n, mut m, mut u, mut phi) = (vec![0.0; len], vec![0.0; len], vec![0.0; len], vec![0.0; len]);
    for i in 0..len {
        let (a, b, c) = loc.blends(i);
        n[i] = loc.sx[i].jet.n + a;
        m[i] = loc.sy[i].jet.m + b;
        u[i] = m[i] / n[i];
        phi[i] = loc.sx[i].jet.phi + c;
    }
    if let Some((i, v)) = n.iter().enumerate().find(|(_, v)| !(**v > 0.0)) {
        return Err(crate::Error::PositivityLoss { x: grid.point(i), n: *v, t: loc.t });
    }
    Ok(AnsatzFields {
        t: loc.t,
        n_sharp: line_field(*grid, n)?,
        m_sharp: line_field(*grid, m)?,
        u_sharp: line_field(*grid, u)?,
        phi_sharp: line_field(*grid, phi)?,
    })
}

/// Flux deviation `P(per) - P(const)` of one periodic solution, with
/// `P = m^2/n + (A+1) n - (m/n)_x - phi_x^2/2 - phi_xx`.
fn periodic_flux(base: &EndState, l: &LineExtension, i: usize, a_temp: f64) -> f64 {
    convective_increment(base.m_bar, base.n_bar, l.rho[i], l.w[i]) + (a_temp + 1.0) * l.rho[i]
        - l.v_x[i]
        - 0.5 * l.varphi_x[i] * l.varphi_x[i]
        - l.varphi_xx[i]
}

/// Residuals `(h1, h2, h3)` of the shock ansatz in the NSP system.
pub fn shock_error_terms(
    grid: &Grid1D,
    profile: &ShockProfile,
    minus: &CellView,
    plus: &CellView,
    shifts: ShiftSample,
) -> Result<ErrorTerms> {
    let loc = ShockLocal::new(grid, profile, minus, plus, shifts.x, shifts.y)?;
    let len = loc.len();
    let s = profile.speed();
    let at = profile.connection.temperature;
    let (sxp, syp) = (s + shifts.x_prime, s + shifts.y_prime);
    let (lm, lp) = (&loc.lm, &loc.lp);
    let (bm, bp) = (&loc.base_m, &loc.base_p);

    let mut h1 = vec![0.0; len];
    let mut h2 = vec![0.0; len];
    let mut h3 = vec![0.0; len];
    let mut q = vec![0.0; len];
    let mut visc = vec![0.0; len];
    for i in 0..len {
        let (px, py) = (&loc.sx[i], &loc.sy[i]);
        let (gx, gy) = (px.sigma, py.sigma);
        let (dgx, dgy) = (px.dsigma, py.dsigma);
        let (a, b, c) = loc.blends(i);
        let jr = lp.rho[i] - lm.rho[i];
        let jw = lp.w[i] - lm.w[i];
        let jp = lp.varphi[i] - lm.varphi[i];
        let jpx = lp.varphi_x[i] - lm.varphi_x[i];
        let jpxx = lp.varphi_xx[i] - lm.varphi_xx[i];
        let dg = gx - gy;

        let (nn, n1, n2) = (px.jet.n, px.jet.dn, px.jet.d2n);
        let (mm, m1, m2) = (py.jet.m, py.jet.dm, py.jet.d2m);
        let (f1, f2, f3) = (px.jet.dphi, px.jet.d2phi, px.jet.d3phi);

        // mass: background part and weight terms
        h1[i] = -sxp * n1 + m1 - dgx * sxp * jr + dgy * jw - dg * (lp.w_x[i] - lm.w_x[i]);

        // momentum background: -(s + Y') M' + (P(N, M, Phi))_x
        let q2 = m2 / nn - 2.0 * m1 * n1 / (nn * nn) - mm * n2 / (nn * nn) + 2.0 * mm * n1 * n1 / (nn * nn * nn);
        let bg = -syp * m1 + 2.0 * mm * m1 / nn - mm * mm * n1 / (nn * nn) + (at + 1.0) * n1 - q2 - f1 * f2 - f3;
        let jflux = periodic_flux(bp, lp, i, at) - periodic_flux(bm, lm, i, at);
        // D2 of the velocity blend below differentiates sigma_Y too; take that part back out
        let jv = lp.v[i] - lm.v[i];
        let jvx = lp.v_x[i] - lm.v_x[i];
        h2[i] = bg - dgy * syp * jw + dgy * jflux - py.d2sigma * jv - dgy * jvx;

        // flux combination Q whose derivative completes h2
        let conv = convective_increment(mm, nn, a, b)
            - (1.0 - gy) * convective_increment(bm.m_bar, bm.n_bar, lm.rho[i], lm.w[i])
            - gy * convective_increment(bp.m_bar, bp.n_bar, lp.rho[i], lp.w[i]);
        let pressure = (at + 1.0) * dg * jr;
        let cx = (1.0 - gx) * lm.varphi_x[i] + gx * lp.varphi_x[i] + dgx * jp;
        let field = -f1 * cx - 0.5 * cx * cx
            + 0.5 * (1.0 - gy) * lm.varphi_x[i] * lm.varphi_x[i]
            + 0.5 * gy * lp.varphi_x[i] * lp.varphi_x[i];
        let curvature = -(dg * jpxx + 2.0 * dgx * jpx + px.d2sigma * jp);
        q[i] = conv + pressure + field + curvature;
        visc[i] = velocity_increment(mm, nn, a, b)
            - (1.0 - gy) * velocity_increment(bm.m_bar, bm.n_bar, lm.rho[i], lm.w[i])
            - gy * velocity_increment(bp.m_bar, bp.n_bar, lp.rho[i], lp.w[i]);

        // Poisson: the profile satisfies its own equation exactly
        let e = (-px.jet.phi).exp();
        h3[i] = 2.0 * dgx * jpx + px.d2sigma * jp + e * (-c).exp_m1()
            - (1.0 - gx) * bm.n_bar * (-lm.varphi[i]).exp_m1()
            - gx * bp.n_bar * (-lp.varphi[i]).exp_m1();
    }
    let qf = SpatialField::new(*grid, q, BoundaryKind::Line)?.diff1()?;
    let vf = SpatialField::new(*grid, visc, BoundaryKind::Line)?.diff2()?;
    for i in 0..len {
        h2[i] += qf.values()[i] - vf.values()[i];
    }
    ErrorTerms::from_values(loc.t, *grid, [h1, h2, h3])
}
