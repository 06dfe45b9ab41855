use super::{compute_profile, ProfileOptions, ShockProfile};
use crate::error::{Error, Result};
use crate::numerics::{fit_exponential_decay, BoundaryKind, SpatialField};
use crate::riemann::ShockConnection;

/// Derivatives smaller than this fraction of their peak are treated as rounding-level tails.
pub const RESOLVED_FRACTION: f64 = 1e-10;

/// Maximum norms of the un-integrated traveling-wave equations on the tabulated profile.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TravelingWaveResidual {
    pub mass: f64,
    pub momentum: f64,
    pub poisson: f64,
    pub spacing: f64,
}

impl TravelingWaveResidual {
    pub fn max(&self) -> f64 {
        self.mass.max(self.momentum).max(self.poisson)
    }
}

/// `-s n' + m'`, `-s m' + (m^2/n + A n)' - n phi' - u''` and `phi'' - n + exp(-phi)`
/// with `diff1`/`diff2`.
pub fn traveling_wave_residual(p: &ShockProfile) -> Result<TravelingWaveResidual> {
    let s = p.connection.speed;
    let a = p.connection.temperature;
    let dn = p.n_s.diff1()?;
    let dm = p.m_s.diff1()?;
    let mass = dm.linear_combination(1.0, &dn, -s)?;
    let flux = p.m_s.zip_map(&p.n_s, |m, n| m * m / n + a * n)?;
    let dflux = flux.diff1()?;
    let dphi = p.phi_s.diff1()?;
    let force = p.n_s.zip_map(&dphi, |n, d| n * d)?;
    let d2u = p.u_s.diff2()?;
    let mom: Vec<f64> = (0..dm.values().len())
        .map(|i| -s * dm.values()[i] + dflux.values()[i] - force.values()[i] - d2u.values()[i])
        .collect();
    let d2phi = p.phi_s.diff2()?;
    let pois: Vec<f64> = (0..d2phi.values().len())
        .map(|i| d2phi.values()[i] - p.n_s.values()[i] + (-p.phi_s.values()[i]).exp())
        .collect();
    let momentum = SpatialField::new(*p.n_s.grid(), mom, BoundaryKind::Line)?;
    let poisson = SpatialField::new(*p.n_s.grid(), pois, BoundaryKind::Line)?;
    Ok(TravelingWaveResidual {
        mass: mass.linf(),
        momentum: momentum.linf(),
        poisson: poisson.linf(),
        spacing: p.xi_grid.spacing(),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct StructureReport {
    /// `n' < 0` at every resolved node.
    pub dn_negative: bool,
    /// `phi' > 0` at every resolved node (phi = -ln n to leading order, so it increases).
    pub dphi_positive: bool,
    /// The inequality chain read literally with `phi' < 0`; expected false.
    pub dphi_negative_as_printed: bool,
    /// Max relative defect of `n' = n^2 u' / (n_- |u_- - s|)`.
    pub identity_defect: f64,
    /// Smallest `C` with `|phi'|/C <= |n'| <= C |phi'|` over resolved nodes.
    pub comparison_constant: f64,
    /// Minimum increment of sigma over resolved nodes (strictly positive expected).
    pub min_sigma_increment_resolved: f64,
    /// Minimum increment of sigma over the whole grid (rounding-level tails included).
    pub min_sigma_increment_all: f64,
    pub sigma_at_zero: f64,
    pub mass_flux_defect: f64,
    pub momentum_decomposition_defect: f64,
    pub quasineutral_tail_defect: f64,
    pub resolved_nodes: usize,
    pub violations: Vec<String>,
}

impl StructureReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn verify_profile_structure(p: &ShockProfile) -> StructureReport {
    let c = &p.connection;
    let xs = p.xi_grid.points();
    let dn = p.dn_s.values();
    let dphi = p.dphi_s.values();
    let du = p.du_s.values();
    let n = p.n_s.values();
    let peak = dn.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let floor = RESOLVED_FRACTION * peak;
    let resolved: Vec<usize> = (0..dn.len()).filter(|&i| dn[i].abs() > floor).collect();
    let mut violations = Vec::new();
    let mut dn_negative = true;
    let mut dphi_positive = true;
    let mut identity_defect = 0.0_f64;
    let mut cmp = 1.0_f64;
    let denom = c.left.n_bar * (c.left.u_bar - c.speed).abs();
    for &i in &resolved {
        if dn[i] >= 0.0 && dn_negative {
            dn_negative = false;
            violations.push(format!("n' = {:e} >= 0 at xi = {}", dn[i], xs[i]));
        }
        if dphi[i] <= 0.0 && dphi_positive {
            dphi_positive = false;
            violations.push(format!("phi' = {:e} <= 0 at xi = {}", dphi[i], xs[i]));
        }
        let rhs = n[i] * n[i] * du[i] / denom;
        identity_defect = identity_defect.max((dn[i] - rhs).abs() / dn[i].abs());
        let r = dn[i].abs() / dphi[i].abs();
        cmp = cmp.max(r).max(1.0 / r);
    }
    let dphi_negative_as_printed = resolved.iter().all(|&i| dphi[i] < 0.0);
    if identity_defect > 1e-6 {
        violations.push(format!("mass-flux derivative identity defect {identity_defect:e}"));
    }
    let sigma = p.sigma();
    let sv = sigma.values();
    let mut min_all = f64::INFINITY;
    let mut min_res = f64::INFINITY;
    for i in 0..sv.len() - 1 {
        let d = sv[i + 1] - sv[i];
        min_all = min_all.min(d);
        if dn[i].abs() > floor && dn[i + 1].abs() > floor {
            min_res = min_res.min(d);
        }
    }
    if !(min_res > 0.0) {
        violations.push(format!("sigma not strictly increasing on the resolved core (min step {min_res:e})"));
    }
    if min_all < -1e-15 {
        violations.push(format!("sigma decreases in the tails by {min_all:e}"));
    }
    let mid = p.xi_grid.nearest(0.0);
    let sigma_at_zero = sv[mid];
    if (sigma_at_zero - 0.5).abs() > 1e-12 {
        violations.push(format!("sigma(0) = {sigma_at_zero}"));
    }
    let m = p.m_s.values();
    let u = p.u_s.values();
    let mut mass_flux_defect = 0.0_f64;
    let mut decomposition = 0.0_f64;
    for i in 0..n.len() {
        mass_flux_defect = mass_flux_defect.max((n[i] * (u[i] - c.speed) - c.mass_flux).abs() / c.mass_flux.abs());
        let s = sv[i];
        decomposition = decomposition.max((m[i] - (c.left.m_bar * (1.0 - s) + c.right.m_bar * s)).abs());
    }
    if mass_flux_defect > 1e-8 {
        violations.push(format!("mass flux defect {mass_flux_defect:e}"));
    }
    let phi = p.phi_s.values();
    let last = n.len() - 1;
    let quasineutral_tail_defect = (phi[0] + n[0].ln()).abs().max((phi[last] + n[last].ln()).abs());
    StructureReport {
        dn_negative,
        dphi_positive,
        dphi_negative_as_printed,
        identity_defect,
        comparison_constant: cmp,
        min_sigma_increment_resolved: min_res,
        min_sigma_increment_all: min_all,
        sigma_at_zero,
        mass_flux_defect,
        momentum_decomposition_defect: decomposition,
        quasineutral_tail_defect,
        resolved_nodes: resolved.len(),
        violations,
    }
}

/// One log-linear tail fit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailFit {
    pub rate: f64,
    pub r_squared: f64,
    pub decades: f64,
    pub samples: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecayReport {
    pub n_left: TailFit,
    pub n_right: TailFit,
    pub u_left: TailFit,
    pub u_right: TailFit,
    pub phi_left: TailFit,
    pub phi_right: TailFit,
    /// `theta = rate / delta` for the density tails.
    pub theta_left: f64,
    pub theta_right: f64,
    /// `C_k` for `k = 0, 1, 2` with the fitted `theta`.
    pub c_k: [f64; 3],
}

impl DecayReport {
    pub fn min_r_squared(&self) -> f64 {
        [self.n_left, self.n_right, self.u_left, self.u_right, self.phi_left, self.phi_right]
            .iter()
            .map(|f| f.r_squared)
            .fold(1.0, f64::min)
    }
}

/// Tail window: `|f - f_end|` between `1e-10 delta` and `1e-4 delta`.
fn tail_fit(xs: &[f64], dev: &[f64], delta: f64, left: bool) -> Result<TailFit> {
    let (hi, lo) = (1e-4 * delta, 1e-10 * delta);
    let mut t = Vec::new();
    let mut y = Vec::new();
    for (x, d) in xs.iter().zip(dev) {
        if (left && *x < 0.0 || !left && *x > 0.0) && d.abs() <= hi && d.abs() >= lo {
            t.push(*x);
            y.push(d.abs());
        }
    }
    if t.len() < 10 {
        return Err(Error::FitRejected(format!("only {} tail samples inside the fit window", t.len())));
    }
    let f = fit_exponential_decay(&t, &y)?;
    if f.decades < 3.0 {
        return Err(Error::FitRejected(format!("tail spans only {:.2} decades", f.decades)));
    }
    Ok(TailFit { rate: if left { -f.rate } else { f.rate }, r_squared: f.r_squared, decades: f.decades, samples: t.len() })
}

pub fn fit_profile_decay(p: &ShockProfile) -> Result<DecayReport> {
    let c = &p.connection;
    let delta = c.strength;
    let xs = p.xi_grid.points();
    let dev = |f: &SpatialField, l: f64, r: f64| -> (Vec<f64>, Vec<f64>) {
        (f.values().iter().map(|v| v - l).collect(), f.values().iter().map(|v| v - r).collect())
    };
    let (nl, nr) = dev(&p.n_s, c.left.n_bar, c.right.n_bar);
    let (ul, ur) = dev(&p.u_s, c.left.u_bar, c.right.u_bar);
    let (pl, pr) = dev(&p.phi_s, c.left.phi_bar, c.right.phi_bar);
    let report = DecayReport {
        n_left: tail_fit(&xs, &nl, delta, true)?,
        n_right: tail_fit(&xs, &nr, delta, false)?,
        u_left: tail_fit(&xs, &ul, delta, true)?,
        u_right: tail_fit(&xs, &ur, delta, false)?,
        phi_left: tail_fit(&xs, &pl, delta, true)?,
        phi_right: tail_fit(&xs, &pr, delta, false)?,
        theta_left: 0.0,
        theta_right: 0.0,
        c_k: [0.0; 3],
    };
    let theta_left = report.n_left.rate / delta;
    let theta_right = report.n_right.rate / delta;
    let derivs = [&p.n_s, &p.dn_s, &p.d2n_s];
    let mut c_k = [0.0_f64; 3];
    for (k, f) in derivs.iter().enumerate() {
        for (i, x) in xs.iter().enumerate() {
            let (end, theta) = if *x < 0.0 { (c.left.n_bar, theta_left) } else { (c.right.n_bar, theta_right) };
            let v = if k == 0 { f.values()[i] - end } else { f.values()[i] };
            let bound = delta.powi(k as i32 + 1) * (-theta * delta * x.abs()).exp();
            c_k[k] = c_k[k].max(v.abs() / bound);
        }
    }
    Ok(DecayReport { theta_left, theta_right, c_k, ..report })
}

/// L-infinity distance between two independent solves (halfwidths differ by 25%).
pub fn uniqueness_defect(conn: &ShockConnection, opts: &ProfileOptions) -> Result<f64> {
    let a = compute_profile(conn, opts)?;
    let wider = ProfileOptions { halfwidth: Some(a.halfwidth() * 1.25), ..*opts };
    let b = compute_profile(conn, &wider)?;
    let mut d = 0.0_f64;
    for (i, x) in a.xi_grid.points().iter().enumerate() {
        let j = b.xi_grid.nearest(*x);
        d = d.max((a.n_s.values()[i] - b.n_s.values()[j]).abs());
        d = d.max((a.phi_s.values()[i] - b.phi_s.values()[j]).abs());
    }
    Ok(d)
}
