//! Remainders of blending nonlinear functions of the shock ansatz.
//!
//! For a function `f` and the weight `g = sigma_X` the remainder is
//! `f(#) - f(*) - (f(-) - f(bar -))(1 - g) - (f(+) - f(bar +)) g`, with `#`
//! the ansatz, `*` the shifted profile and `+-` the periodic solutions. Each
//! should be a product of a decaying-in-time and an integrable-in-space factor.

use super::shock::{ShiftSample, ShockLocal};
use super::{line_field, velocity_increment};
use crate::error::Result;
use crate::numerics::{fit_exponential_decay, Grid1D, SpatialField};
use crate::periodic::CellView;
use crate::profile::ShockProfile;

/// Catalogue remainders at one time.
#[derive(Debug, Clone, PartialEq)]
pub struct RemainderSample {
    pub t: f64,
    /// `f(n) = n`.
    pub identity: SpatialField,
    /// `f(n) = 1/n`.
    pub reciprocal: SpatialField,
    /// `f(u) = u^2`.
    pub square: SpatialField,
    /// `f(phi) = exp(-phi)`.
    pub exponential: SpatialField,
    /// `(u^2/n)_x`.
    pub kinetic_flux: SpatialField,
    /// Sup of the periodic perturbations `(rho, v, varphi)` over both sides.
    pub amplitude: f64,
}

impl RemainderSample {
    pub fn fields(&self) -> [(&'static str, &SpatialField); 5] {
        [
            ("identity", &self.identity),
            ("reciprocal", &self.reciprocal),
            ("square", &self.square),
            ("exponential", &self.exponential),
            ("kinetic_flux", &self.kinetic_flux),
        ]
    }
}

pub fn catalogue_remainders(grid: &Grid1D, profile: &ShockProfile, minus: &CellView, plus: &CellView, shifts: ShiftSample) -> Result<RemainderSample> {
    let loc = ShockLocal::new(grid, profile, minus, plus, shifts.x, shifts.y)?;
    let len = loc.len();
    let (lm, lp) = (&loc.lm, &loc.lp);
    let (bm, bp) = (&loc.base_m, &loc.base_p);
    let mut out = [vec![0.0; len], vec![0.0; len], vec![0.0; len], vec![0.0; len]];
    let mut g_rem = vec![0.0; len];
    let mut g_jump = vec![0.0; len];
    let mut amplitude = 0.0_f64;
    for i in 0..len {
        let px = &loc.sx[i];
        let g = px.sigma;
        let (a, b, c) = loc.blends(i);
        let nn = px.jet.n;
        let mm = loc.sy[i].jet.m;
        let ns = nn + a;
        out[0][i] = ns - nn - (1.0 - g) * lm.rho[i] - g * lp.rho[i];

        let recip = |n: f64, r: f64| -r / (n * (n + r));
        out[1][i] = recip(nn, a) - (1.0 - g) * recip(bm.n_bar, lm.rho[i]) - g * recip(bp.n_bar, lp.rho[i]);

        let ustar = mm / nn;
        let du = velocity_increment(mm, nn, a, b);
        let sq = |u: f64, v: f64| v * (2.0 * u + v);
        out[2][i] = sq(ustar, du) - (1.0 - g) * sq(bm.u_bar, lm.v[i]) - g * sq(bp.u_bar, lp.v[i]);

        let e = (-px.jet.phi).exp();
        out[3][i] = e * (-c).exp_m1() - (1.0 - g) * bm.n_bar * (-lm.varphi[i]).exp_m1() - g * bp.n_bar * (-lp.varphi[i]).exp_m1();

        // u^2/n increments: (u + v)^2/(n + r) - u^2/n
        let kin = |u: f64, n: f64, v: f64, r: f64| sq(u, v) / (n + r) - u * u * r / (n * (n + r));
        let gm = kin(bm.u_bar, bm.n_bar, lm.v[i], lm.rho[i]);
        let gp = kin(bp.u_bar, bp.n_bar, lp.v[i], lp.rho[i]);
        g_rem[i] = kin(ustar, nn, du, a) - (1.0 - g) * gm - g * gp;
        g_jump[i] = px.dsigma * (gp - gm);

        for v in [lm.rho[i], lm.v[i], lm.varphi[i], lp.rho[i], lp.v[i], lp.varphi[i]] {
            amplitude = amplitude.max(v.abs());
        }
    }
    let dg = line_field(*grid, g_rem)?.diff1()?;
    let kinetic_flux: Vec<f64> = dg.values().iter().zip(&g_jump).map(|(a, b)| a + b).collect();
    let [identity, reciprocal, square, exponential] = out;
    Ok(RemainderSample {
        t: loc.t,
        identity: line_field(*grid, identity)?,
        reciprocal: line_field(*grid, reciprocal)?,
        square: line_field(*grid, square)?,
        exponential: line_field(*grid, exponential)?,
        kinetic_flux: line_field(*grid, kinetic_flux)?,
        amplitude,
    })
}

/// Outcome for one catalogue entry.
#[derive(Debug, Clone, PartialEq)]
pub struct RemainderCheck {
    pub name: &'static str,
    /// Largest sup-norm over the samples.
    pub max_linf: f64,
    /// Fitted decay rate of the sup-norm, absent for remainders at rounding level.
    pub rate: Option<f64>,
    /// Largest `||R(t)/E(t)||_p / ((1+t)^(1/p) ||R(0)/E(0)||_p)` for `p = 1, 2`.
    pub growth_ratio: [f64; 2],
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RemainderReport {
    pub alpha: f64,
    pub checks: Vec<RemainderCheck>,
}

impl RemainderReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Largest sup-norm treated as exact cancellation.
const ROUNDING_LEVEL: f64 = 1e-14;
/// Growth allowance factor on the spatial part.
const GROWTH_FACTOR: f64 = 10.0;

/// Checks exponential decay (rate at least `alpha/2` over `t >= t_fit`) and the
/// bounded growth of the spatial factor for every catalogue entry. The first
/// sample is the reference for the growth ratios.
pub fn remainder_decay_checks(samples: &[RemainderSample], alpha: f64, t_fit: f64) -> Result<RemainderReport> {
    if samples.len() < 3 {
        return Err(crate::Error::InvalidArgument(format!("need at least 3 remainder samples, got {}", samples.len())));
    }
    let mut checks = Vec::new();
    for k in 0..5 {
        let name = samples[0].fields()[k].0;
        let linf: Vec<f64> = samples.iter().map(|s| s.fields()[k].1.linf()).collect();
        let max_linf = linf.iter().cloned().fold(0.0, f64::max);
        if max_linf <= ROUNDING_LEVEL {
            checks.push(RemainderCheck { name, max_linf, rate: None, growth_ratio: [0.0; 2], passed: true });
            continue;
        }
        let (t, y): (Vec<f64>, Vec<f64>) =
            samples.iter().zip(&linf).filter(|(s, v)| s.t >= t_fit && **v > 0.0).map(|(s, v)| (s.t, *v)).unzip();
        let rate = fit_exponential_decay(&t, &y).ok().map(|f| f.rate);
        let sp = |s: &RemainderSample, p: f64| s.fields()[k].1.lp(p) / s.amplitude;
        let mut growth_ratio = [0.0_f64; 2];
        for (j, p) in [1.0, 2.0].into_iter().enumerate() {
            let r0 = sp(&samples[0], p);
            for s in samples.iter().skip(1) {
                growth_ratio[j] = growth_ratio[j].max(sp(s, p) / ((1.0 + s.t).powf(1.0 / p) * r0));
            }
        }
        let passed = rate.is_some_and(|r| r >= 0.5 * alpha) && growth_ratio.iter().all(|g| *g <= GROWTH_FACTOR);
        checks.push(RemainderCheck { name, max_linf, rate, growth_ratio, passed });
    }
    Ok(RemainderReport { alpha, checks })
}
