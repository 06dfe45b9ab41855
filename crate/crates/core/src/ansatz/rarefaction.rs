//! Rarefaction ansatz: the smoothed fan plus the periodic perturbations blended
//! with `sigma = (n^r - n_-)/(n_+ - n_-)` and `eta = (u^r - u_-)/(u_+ - u_-)`.

use super::smooth::{RarefactionSample, SmoothRarefaction};
use super::{common_time, line_field, AnsatzFields, ErrorTerms};
use crate::error::{Error, Result};
use crate::numerics::{BoundaryKind, Grid1D, SpatialField};
use crate::periodic::{CellView, LineExtension};

struct RareLocal {
    t: f64,
    r: Vec<RarefactionSample>,
    sigma: Vec<f64>,
    eta: Vec<f64>,
    lm: LineExtension,
    lp: LineExtension,
}

impl RareLocal {
    fn new(grid: &Grid1D, smooth: &SmoothRarefaction, minus: &CellView, plus: &CellView) -> Result<Self> {
        let t = common_time(minus, plus)?;
        let e = &smooth.endpoints;
        let close = |a: f64, b: f64| (a - b).abs() <= 1e-12 * a.abs().max(1.0);
        if !close(e.left.n_bar, minus.base.n_bar)
            || !close(e.left.m_bar, minus.base.m_bar)
            || !close(e.right.n_bar, plus.base.n_bar)
            || !close(e.right.m_bar, plus.base.m_bar)
        {
            return Err(Error::InvalidArgument("periodic base states differ from the rarefaction end states".into()));
        }
        let r: Vec<RarefactionSample> = grid.points().iter().map(|x| smooth.sample(*x, t)).collect::<Result<_>>()?;
        let (sigma, eta) = r.iter().map(|s| smooth.weights(s)).unzip();
        Ok(Self { t, r, sigma, eta, lm: minus.extend(grid), lp: plus.extend(grid) })
    }

    /// Density blend `a`, velocity blend `vb` and potential blend `c` at node `i`.
    fn blends(&self, i: usize) -> (f64, f64, f64) {
        let (g, h) = (self.sigma[i], self.eta[i]);
        (
            self.lm.rho[i] * (1.0 - g) + self.lp.rho[i] * g,
            self.lm.v[i] * (1.0 - h) + self.lp.v[i] * h,
            self.lm.varphi[i] * (1.0 - g) + self.lp.varphi[i] * g,
        )
    }
}

/// Rarefaction ansatz at the common time of the two periodic states.
pub fn build_rarefaction_ansatz(grid: &Grid1D, smooth: &SmoothRarefaction, minus: &CellView, plus: &CellView) -> Result<AnsatzFields> {
    let loc = RareLocal::new(grid, smooth, minus, plus)?;
    let len = loc.r.len();
    let (mut n, mut m, mut u, mut phi) = (vec![0.0; len], vec![0.0; len], vec![0.0; len], vec![0.0; len]);
    for i in 0..len {
        let (a, vb, c) = loc.blends(i);
        n[i] = loc.r[i].n + a;
        u[i] = loc.r[i].u + vb;
        m[i] = n[i] * u[i];
        phi[i] = loc.r[i].phi + c;
    }
    if let Some((i, v)) = n.iter().enumerate().find(|(_, v)| !(**v > 0.0)) {
        return Err(Error::PositivityLoss { x: grid.point(i), n: *v, t: loc.t });
    }
    Ok(AnsatzFields {
        t: loc.t,
        n_sharp: line_field(*grid, n)?,
        m_sharp: line_field(*grid, m)?,
        u_sharp: line_field(*grid, u)?,
        phi_sharp: line_field(*grid, phi)?,
    })
}

/// Residuals `(k1, k2, k3)` of the rarefaction ansatz in the `(n, u, phi)` form of
/// the system, with the residual of the smoothed fan itself removed.
pub fn rarefaction_error_terms(grid: &Grid1D, smooth: &SmoothRarefaction, minus: &CellView, plus: &CellView) -> Result<ErrorTerms> {
    let loc = RareLocal::new(grid, smooth, minus, plus)?;
    let len = loc.r.len();
    let e = &smooth.endpoints;
    let at = e.temperature;
    let (dn, du) = (e.right.n_bar - e.left.n_bar, e.right.u_bar - e.left.u_bar);
    let (lm, lp) = (&loc.lm, &loc.lp);
    let field = |v: Vec<f64>| SpatialField::new(*grid, v, BoundaryKind::Line);

    let mut k1 = vec![0.0; len];
    let mut k2 = vec![0.0; len];
    let mut k3 = vec![0.0; len];
    let (mut flux, mut kin, mut logn, mut cv, mut vb_all) =
        (vec![0.0; len], vec![0.0; len], vec![0.0; len], vec![0.0; len], vec![0.0; len]);
    for i in 0..len {
        let r = &loc.r[i];
        let (g, h) = (loc.sigma[i], loc.eta[i]);
        let (a, vb, c) = loc.blends(i);
        let (sigma_t, eta_t) = (r.n_t / dn, r.u_t / du);
        k1[i] = -(1.0 - g) * lm.w_x[i] - g * lp.w_x[i] + (lp.rho[i] - lm.rho[i]) * sigma_t;
        flux[i] = a * r.u + r.n * vb + a * vb;
        k2[i] = (1.0 - h) * lm.v_t[i] + h * lp.v_t[i] + (lp.v[i] - lm.v[i]) * eta_t;
        kin[i] = 0.5 * vb * (2.0 * r.u + vb);
        logn[i] = at * (a / r.n).ln_1p();
        cv[i] = c;
        vb_all[i] = vb;
        k3[i] = -a + r.n * (-c).exp_m1();
    }
    let d1 = |v: Vec<f64>| -> Result<Vec<f64>> { Ok(field(v)?.diff1()?.into_values()) };
    let dflux = d1(flux)?;
    let dkin = d1(kin)?;
    let dlog = d1(logn)?;
    let cf = field(cv)?;
    let dc = cf.diff1()?;
    let d2c = cf.diff2()?;
    let d2v = field(vb_all)?.diff2()?;
    for i in 0..len {
        let r = &loc.r[i];
        let (a, _, _) = loc.blends(i);
        let ns = r.n + a;
        k1[i] += dflux[i];
        k2[i] += dkin[i] + dlog[i] - dc.values()[i] - (d2v.values()[i] / ns - r.u_xx * a / (ns * r.n));
        k3[i] += d2c.values()[i];
    }
    ErrorTerms::from_values(loc.t, *grid, [k1, k2, k3])
}
