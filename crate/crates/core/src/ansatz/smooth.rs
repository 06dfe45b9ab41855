//! Smooth approximation of the 2-rarefaction fan: Burgers' equation
//! `w_t + w w_x = 0` with monotone `tanh` data, solved along characteristics.

use crate::error::{Error, Result};
use crate::riemann::{sound_speed, RarefactionEndpoints};

const MAX_ITER: usize = 200;

/// Burgers solution and its derivatives at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BurgersJet {
    pub w: f64,
    pub w_x: f64,
    pub w_xx: f64,
    pub w_xxx: f64,
    pub w_t: f64,
    /// Foot of the characteristic through `(x, t)`.
    pub foot: f64,
}

#[derive(Debug, Clone, Copy)]
struct Initial {
    mid: f64,
    half: f64,
    eps: f64,
}

impl Initial {
    fn new(ends: &RarefactionEndpoints, eps: f64) -> Self {
        let (wl, wr) = ends.w_bounds();
        Self { mid: 0.5 * (wl + wr), half: 0.5 * (wr - wl), eps }
    }

    /// `(w0, w0', w0'', w0''')` at `xi`.
    fn eval(&self, xi: f64) -> (f64, f64, f64, f64) {
        let e = self.eps;
        let th = (e * xi).tanh();
        let c = (e * xi).cosh();
        let sech2 = if c.is_finite() { 1.0 / (c * c) } else { 0.0 };
        let b = self.half;
        (
            self.mid + b * th,
            b * e * sech2,
            -2.0 * b * e * e * th * sech2,
            -2.0 * b * e * e * e * sech2 * (1.0 - 3.0 * th * th),
        )
    }
}

/// Characteristic foot `xi` with `x = xi + t w0(xi)`, by Newton safeguarded with bisection.
fn foot(init: &Initial, x: f64, t: f64) -> Result<f64> {
    if t == 0.0 || init.half == 0.0 {
        return Ok(x - t * init.mid);
    }
    let (wl, wr) = (init.mid - init.half, init.mid + init.half);
    let (mut lo, mut hi) = (x - t * wr, x - t * wl);
    let g = |xi: f64| {
        let (w, dw, _, _) = init.eval(xi);
        (xi + t * w - x, 1.0 + t * dw)
    };
    let mut xi = (x - t * init.mid).clamp(lo, hi);
    let mut last_step = hi - lo;
    for _ in 0..MAX_ITER {
        let (f, df) = g(xi);
        if f == 0.0 {
            return Ok(xi);
        }
        if f > 0.0 {
            hi = xi;
        } else {
            lo = xi;
        }
        let newton = xi - f / df;
        // Newton only while it stays in the bracket and at least halves the step
        let next = if newton > lo && newton < hi && (newton - xi).abs() <= 0.5 * last_step {
            newton
        } else {
            0.5 * (lo + hi)
        };
        last_step = (next - xi).abs();
        if (next - xi).abs() <= 1e-15 * xi.abs().max(1.0) || hi - lo <= 1e-15 * xi.abs().max(1.0) {
            return Ok(next);
        }
        xi = next;
    }
    Err(Error::NoConvergence { solver: "characteristic foot", iterations: MAX_ITER, residual: g(xi).0.abs() })
}

/// Value of the smoothed Burgers solution at `(x, t)`.
pub fn burgers_smooth(x: f64, t: f64, ends: &RarefactionEndpoints, eps: f64) -> Result<f64> {
    Ok(burgers_jet(x, t, ends, eps)?.w)
}

/// Value and derivatives of the smoothed Burgers solution, by implicit differentiation.
pub fn burgers_jet(x: f64, t: f64, ends: &RarefactionEndpoints, eps: f64) -> Result<BurgersJet> {
    if !(t >= 0.0) {
        return Err(Error::InvalidArgument(format!("Burgers time must be nonnegative, got {t}")));
    }
    if !(eps > 0.0) {
        return Err(Error::InvalidArgument(format!("smoothing parameter must be positive, got {eps}")));
    }
    let init = Initial::new(ends, eps);
    let xi = foot(&init, x, t)?;
    let (w, d1, d2, d3) = init.eval(xi);
    let j = 1.0 + t * d1;
    let w_x = d1 / j;
    Ok(BurgersJet {
        w,
        w_x,
        w_xx: d2 / j.powi(3),
        w_xxx: (d3 * j - 3.0 * t * d2 * d2) / j.powi(5),
        w_t: -w * w_x,
        foot: xi,
    })
}

/// Smoothed rarefaction state and derivatives at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RarefactionSample {
    pub n: f64,
    pub u: f64,
    pub phi: f64,
    pub n_x: f64,
    pub u_x: f64,
    pub phi_x: f64,
    pub n_xx: f64,
    pub u_xx: f64,
    pub n_t: f64,
    pub u_t: f64,
}

/// The smoothed 2-rarefaction `w^r(x, t + 1)` mapped back to `(n, u, phi)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmoothRarefaction {
    pub endpoints: RarefactionEndpoints,
    pub epsilon: f64,
}

impl SmoothRarefaction {
    pub fn new(endpoints: RarefactionEndpoints, epsilon: f64) -> Result<Self> {
        if !(epsilon > 0.0) || !epsilon.is_finite() {
            return Err(Error::InvalidArgument(format!("smoothing parameter must be positive, got {epsilon}")));
        }
        Ok(Self { endpoints, epsilon })
    }

    pub fn sample(&self, x: f64, t: f64) -> Result<RarefactionSample> {
        approx_rarefaction(x, t, &self.endpoints, self.epsilon)
    }

    /// Weights `sigma = (n - n_-)/(n_+ - n_-)` and `eta = (u - u_-)/(u_+ - u_-)`.
    pub fn weights(&self, s: &RarefactionSample) -> (f64, f64) {
        let e = &self.endpoints;
        let frac = |v: f64, a: f64, b: f64| ((v - a) / (b - a)).clamp(0.0, 1.0);
        (frac(s.n, e.left.n_bar, e.right.n_bar), frac(s.u, e.left.u_bar, e.right.u_bar))
    }
}

/// State of the smoothed rarefaction at time `t` (Burgers time `t + 1`).
pub fn approx_rarefaction(x: f64, t: f64, ends: &RarefactionEndpoints, eps: f64) -> Result<RarefactionSample> {
    let jet = burgers_jet(x, t + 1.0, ends, eps)?;
    let c = sound_speed(ends.temperature);
    let u = jet.w - c;
    let n = ends.left.n_bar * ((u - ends.left.u_bar) / c).exp();
    let q = jet.w_x / c;
    Ok(RarefactionSample {
        n,
        u,
        phi: -n.ln(),
        n_x: n * q,
        u_x: jet.w_x,
        phi_x: -q,
        n_xx: n * (jet.w_xx / c + q * q),
        u_xx: jet.w_xx,
        n_t: n * jet.w_t / c,
        u_t: jet.w_t,
    })
}

impl SmoothRarefaction {
    /// Smallest constants `C_p`, `p = 1, 2, inf`, with
    /// `||d/dx (n, u, phi)(t)||_p <= C_p min(d eps^(1-1/p), d^(1/p) t^(-1+1/p))`
    /// at every sampled time, `d` the wave strength.
    pub fn derivative_envelope(&self, grid: &crate::numerics::Grid1D, times: &[f64]) -> Result<[f64; 3]> {
        let d = self.endpoints.strength;
        let eps = self.epsilon;
        let mut c = [0.0_f64; 3];
        for &t in times {
            if !(t > 0.0) {
                return Err(Error::InvalidArgument(format!("envelope times must be positive, got {t}")));
            }
            let mag: Vec<f64> = grid
                .points()
                .iter()
                .map(|x| self.sample(*x, t).map(|s| (s.n_x * s.n_x + s.u_x * s.u_x + s.phi_x * s.phi_x).sqrt()))
                .collect::<Result<_>>()?;
            let f = crate::numerics::SpatialField::new(*grid, mag, crate::numerics::BoundaryKind::Line)?;
            for (j, p) in [1.0, 2.0, f64::INFINITY].into_iter().enumerate() {
                let q = if p.is_finite() { 1.0 / p } else { 0.0 };
                let bound = (d * eps.powf(1.0 - q)).min(d.powf(q) * t.powf(q - 1.0));
                let norm = if p.is_finite() { f.lp(p) } else { f.linf() };
                c[j] = c[j].max(norm / bound);
            }
        }
        Ok(c)
    }

    /// Sup over the grid and the three components of the distance to the centred fan at `x/t`.
    pub fn fan_distance(&self, grid: &crate::numerics::Grid1D, t: f64) -> Result<f64> {
        if !(t > 0.0) {
            return Err(Error::InvalidArgument(format!("fan time must be positive, got {t}")));
        }
        let mut worst = 0.0_f64;
        for x in grid.points() {
            let s = self.sample(x, t)?;
            let (n, u, phi) = crate::riemann::rarefaction_exact(&self.endpoints, x / t);
            worst = worst.max((s.n - n).abs()).max((s.u - u).abs()).max((s.phi - phi).abs());
        }
        Ok(worst)
    }
}
