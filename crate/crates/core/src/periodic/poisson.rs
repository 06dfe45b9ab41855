//! Newton solver for the discrete Poisson-Boltzmann equation
//! `D2 phi = n - exp(-phi)`.

use crate::error::{Error, Result};
use crate::numerics::{BoundaryKind, SpatialField, TridiagonalSystem};

/// Boundary treatment for [`poisson_boltzmann_solve`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PoissonBoundary {
    Periodic,
    Dirichlet { left: f64, right: f64 },
}

pub const MAX_NEWTON: usize = 50;

/// Solves for `phi` given the density, starting from the quasineutral guess `-ln n`.
pub fn poisson_boltzmann_solve(n: &SpatialField, boundary: PoissonBoundary, tol: f64) -> Result<SpatialField> {
    let guess: Vec<f64> = n.values().iter().map(|v| if *v > 0.0 { -v.ln() } else { f64::NAN }).collect();
    if let Some((i, v)) = n.values().iter().enumerate().find(|(_, v)| !(**v > 0.0)) {
        return Err(Error::PositivityLoss { x: n.grid().point(i), n: *v, t: f64::NAN });
    }
    let h = n.grid().spacing();
    let phi = match (boundary, n.boundary()) {
        (PoissonBoundary::Periodic, BoundaryKind::Periodic) => {
            let mut p = guess[..guess.len() - 1].to_vec();
            solve_periodic(n.distinct(), &mut p, h, tol)?;
            p.push(p[0]);
            p
        }
        (PoissonBoundary::Dirichlet { left, right }, BoundaryKind::Line) => {
            let mut p = guess;
            let last = p.len() - 1;
            p[0] = left;
            p[last] = right;
            solve_dirichlet(n.values(), &mut p, h, tol)?;
            p
        }
        _ => {
            return Err(Error::InvalidArgument(
                "periodic potential needs a periodic density, Dirichlet data a line density".into(),
            ))
        }
    };
    SpatialField::new(*n.grid(), phi, n.boundary())
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
}

/// Residual `D2 phi - n + exp(-phi)` on a periodic cell of `phi.len()` distinct nodes.
pub fn periodic_residual(n: &[f64], phi: &[f64], h: f64) -> Vec<f64> {
    let m = phi.len();
    let ih2 = 1.0 / (h * h);
    (0..m)
        .map(|i| {
            let ip = if i + 1 == m { 0 } else { i + 1 };
            let im = if i == 0 { m - 1 } else { i - 1 };
            (phi[ip] - 2.0 * phi[i] + phi[im]) * ih2 - n[i] + (-phi[i]).exp()
        })
        .collect()
}

/// Residual at interior nodes of a line grid (end values are data); ends report 0.
pub fn dirichlet_residual(n: &[f64], phi: &[f64], h: f64) -> Vec<f64> {
    let m = phi.len();
    let ih2 = 1.0 / (h * h);
    let mut r = vec![0.0; m];
    for i in 1..m - 1 {
        r[i] = (phi[i + 1] - 2.0 * phi[i] + phi[i - 1]) * ih2 - n[i] + (-phi[i]).exp();
    }
    r
}

/// Newton iteration in place on a periodic cell; `phi` holds the initial iterate.
pub fn solve_periodic(n: &[f64], phi: &mut [f64], h: f64, tol: f64) -> Result<usize> {
    newton_periodic(phi, h, tol, |p| periodic_residual(n, p, h), |p| (-p).exp())
}

/// Residual `D2 varphi - rho + n_bar expm1(-varphi)` of the deviation form.
pub fn deviation_residual(rho: &[f64], n_bar: f64, varphi: &[f64], h: f64) -> Vec<f64> {
    let m = varphi.len();
    let ih2 = 1.0 / (h * h);
    (0..m)
        .map(|i| {
            let ip = if i + 1 == m { 0 } else { i + 1 };
            let im = if i == 0 { m - 1 } else { i - 1 };
            (varphi[ip] - 2.0 * varphi[i] + varphi[im]) * ih2 - rho[i] + n_bar * (-varphi[i]).exp_m1()
        })
        .collect()
}

/// Deviation `varphi = phi + ln n_bar` of the periodic potential for `n = n_bar + rho`,
/// converged to `tol` relative to the size of `rho`.
pub fn solve_periodic_deviation(rho: &[f64], n_bar: f64, varphi: &mut [f64], h: f64, tol: f64) -> Result<usize> {
    let scale = max_abs(rho);
    if scale == 0.0 {
        varphi.iter_mut().for_each(|v| *v = 0.0);
        return Ok(0);
    }
    newton_periodic(varphi, h, tol * scale, |p| deviation_residual(rho, n_bar, p, h), |p| n_bar * (-p).exp())
}

/// Damped Newton for `D2 x + f(x) = 0` on a periodic cell; `df` is `-f'`.
fn newton_periodic(x: &mut [f64], h: f64, tol: f64, residual: impl Fn(&[f64]) -> Vec<f64>, df: impl Fn(f64) -> f64) -> Result<usize> {
    let m = x.len();
    let ih2 = 1.0 / (h * h);
    let mut r = residual(x);
    let mut rn = max_abs(&r);
    for it in 0..MAX_NEWTON {
        if rn <= tol {
            return Ok(it);
        }
        let diag: Vec<f64> = x.iter().map(|p| -2.0 * ih2 - df(*p)).collect();
        let sys = TridiagonalSystem::new(vec![ih2; m], diag, vec![ih2; m], r.iter().map(|v| -v).collect(), true)?;
        let step = sys.solve()?;
        let mut lambda = 1.0;
        loop {
            let trial: Vec<f64> = x.iter().zip(&step).map(|(p, d)| p + lambda * d).collect();
            let rt = residual(&trial);
            let rtn = max_abs(&rt);
            if rtn < rn || lambda < 1e-3 || rtn <= tol {
                x.copy_from_slice(&trial);
                r = rt;
                break;
            }
            lambda *= 0.5;
        }
        let prev = rn;
        rn = max_abs(&r);
        if rn >= prev && max_abs(&step) * lambda <= 1e-15 * max_abs(x).max(f64::MIN_POSITIVE) {
            break;
        }
    }
    if rn <= tol {
        Ok(MAX_NEWTON)
    } else {
        Err(Error::NoConvergence { solver: "Poisson-Boltzmann Newton", iterations: MAX_NEWTON, residual: rn })
    }
}

/// Newton iteration on the interior of a line grid; `phi[0]` and `phi[last]` are kept.
pub fn solve_dirichlet(n: &[f64], phi: &mut [f64], h: f64, tol: f64) -> Result<usize> {
    let m = phi.len();
    if m < 3 {
        return Err(Error::GridTooSmall { min: 3, got: m });
    }
    let k = m - 2;
    let ih2 = 1.0 / (h * h);
    let mut r = dirichlet_residual(n, phi, h);
    let mut rn = max_abs(&r);
    for it in 0..MAX_NEWTON {
        if rn <= tol {
            return Ok(it);
        }
        let diag: Vec<f64> = phi[1..m - 1].iter().map(|p| -2.0 * ih2 - (-p).exp()).collect();
        let rhs: Vec<f64> = r[1..m - 1].iter().map(|v| -v).collect();
        let sys = TridiagonalSystem::new(vec![ih2; k], diag, vec![ih2; k], rhs, false)?;
        let step = sys.solve()?;
        let mut lambda = 1.0;
        loop {
            let mut trial = phi.to_vec();
            for i in 0..k {
                trial[i + 1] += lambda * step[i];
            }
            let rt = dirichlet_residual(n, &trial, h);
            let rtn = max_abs(&rt);
            if rtn < rn || lambda < 1e-3 || rtn <= tol {
                phi.copy_from_slice(&trial);
                r = rt;
                break;
            }
            lambda *= 0.5;
        }
        let prev = rn;
        rn = max_abs(&r);
        if rn >= prev && max_abs(&step) * lambda < 1e-15 {
            break;
        }
    }
    if rn <= tol {
        Ok(MAX_NEWTON)
    } else {
        Err(Error::NoConvergence { solver: "Poisson-Boltzmann Newton", iterations: MAX_NEWTON, residual: rn })
    }
}
