//! Heteroclinic orbit by trapezoid collocation and damped Newton.
//!
//! Unknowns are the deviations `z_k` at the nodes of `[-X, X]`. Besides the
//! `3N` collocation equations, the orbit must leave the left state inside its
//! unstable subspace (one projection condition), enter the right state inside
//! its stable subspace (one projection condition), and satisfy the phase
//! condition `sigma(0) = 1/2`.

use super::ode::{left_eigenpairs, ProfileOde};
use crate::error::{Error, Result};
use crate::numerics::banded::BandMatrix;

pub(crate) struct Linearization {
    pub left_stable: Vec<[f64; 3]>,
    pub right_unstable: Vec<[f64; 3]>,
    /// Slowest exponential rate at the left (unstable) and right (stable) state.
    pub slow_left: f64,
    pub slow_right: f64,
    pub fast_left: f64,
    pub fast_right: f64,
}

pub(crate) fn linearize(ode: &ProfileOde) -> Result<Linearization> {
    let left = left_eigenpairs(&ode.jacobian_dev([0.0; 3]))?;
    let right = left_eigenpairs(&ode.jacobian_dev(ode.right_equilibrium_dev()))?;
    let left_stable: Vec<[f64; 3]> = left.iter().filter(|p| p.0 < 0.0).map(|p| p.1).collect();
    let right_unstable: Vec<[f64; 3]> = right.iter().filter(|p| p.0 > 0.0).map(|p| p.1).collect();
    if left_stable.len() != 1 || right_unstable.len() != 1 {
        return Err(Error::Inadmissible(format!(
            "unexpected saddle structure: left eigenvalues {:?}, right eigenvalues {:?}",
            left.iter().map(|p| p.0).collect::<Vec<_>>(),
            right.iter().map(|p| p.0).collect::<Vec<_>>()
        )));
    }
    let pos_left: Vec<f64> = left.iter().map(|p| p.0).filter(|l| *l > 0.0).collect();
    let neg_right: Vec<f64> = right.iter().map(|p| -p.0).filter(|l| *l > 0.0).collect();
    let min = |v: &[f64]| v.iter().cloned().fold(f64::INFINITY, f64::min);
    let max = |v: &[f64]| v.iter().cloned().fold(0.0, f64::max);
    Ok(Linearization {
        left_stable,
        right_unstable,
        slow_left: min(&pos_left),
        slow_right: min(&neg_right),
        fast_left: max(&pos_left),
        fast_right: max(&neg_right),
    })
}

pub(crate) struct Collocation {
    pub xi_min: f64,
    pub h: f64,
    pub intervals: usize,
    pub z: Vec<[f64; 3]>,
    pub newton_iterations: usize,
    pub residual: f64,
}

const KL: usize = 4;
const KU: usize = 4;

fn dot(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Rows of the nonlinear system in band order.
fn residual(ode: &ProfileOde, lin: &Linearization, z: &[[f64; 3]], h: f64, target: f64) -> Vec<f64> {
    let nint = z.len() - 1;
    let mid = nint / 2;
    let zr = ode.right_equilibrium_dev();
    let f: Vec<[f64; 3]> = z.iter().map(|zi| ode.rhs_dev(*zi)).collect();
    let mut r = Vec::with_capacity(3 * nint + 3);
    r.push(dot(&lin.left_stable[0], &z[0]));
    for k in 0..nint {
        if k == mid {
            r.push(z[mid][0] - target);
        }
        for c in 0..3 {
            r.push(z[k + 1][c] - z[k][c] - 0.5 * h * (f[k][c] + f[k + 1][c]));
        }
    }
    let d = [z[nint][0] - zr[0], z[nint][1] - zr[1], z[nint][2] - zr[2]];
    r.push(dot(&lin.right_unstable[0], &d));
    r
}

fn jacobian(ode: &ProfileOde, lin: &Linearization, z: &[[f64; 3]], h: f64) -> Result<BandMatrix> {
    let nint = z.len() - 1;
    let mid = nint / 2;
    let size = 3 * (nint + 1);
    let mut m = BandMatrix::zeros(size, KL, KU);
    let jacs: Vec<_> = z.iter().map(|zi| ode.jacobian_dev(*zi)).collect();
    let mut row = 0;
    for c in 0..3 {
        m.set(row, c, lin.left_stable[0][c])?;
    }
    row += 1;
    for k in 0..nint {
        if k == mid {
            m.set(row, 3 * mid, 1.0)?;
            row += 1;
        }
        for r in 0..3 {
            for c in 0..3 {
                let id = if r == c { 1.0 } else { 0.0 };
                m.set(row + r, 3 * k + c, -id - 0.5 * h * jacs[k][(r, c)])?;
                m.set(row + r, 3 * (k + 1) + c, id - 0.5 * h * jacs[k + 1][(r, c)])?;
            }
        }
        row += 3;
    }
    for c in 0..3 {
        m.set(row, 3 * nint + c, lin.right_unstable[0][c])?;
    }
    Ok(m)
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
}

pub(crate) fn solve_collocation(
    ode: &ProfileOde,
    lin: &Linearization,
    halfwidth: f64,
    spacing: f64,
    max_iter: usize,
) -> Result<Collocation> {
    let half_steps = (halfwidth / spacing).ceil() as usize;
    let nint = 2 * half_steps;
    let h = spacing;
    let xi_min = -(half_steps as f64) * h;
    let zr = ode.right_equilibrium_dev();
    let target = 0.5 * zr[0];
    let kappa = 0.25 * (lin.slow_left + lin.slow_right);
    // tanh guess, with phi and psi quasineutral
    let mut z: Vec<[f64; 3]> = (0..=nint)
        .map(|k| {
            let xi = xi_min + k as f64 * h;
            let sig = 0.5 * (1.0 + (kappa * xi).tanh());
            let dn = zr[0] * sig;
            let n = ode.n_left + dn;
            let dphi = -(n / ode.n_left).ln();
            let dsig = 0.5 * kappa / (kappa * xi).cosh().powi(2);
            [dn, dphi, -zr[0] * dsig / n]
        })
        .collect();
    let mut r = residual(ode, lin, &z, h, target);
    let mut rn = max_abs(&r);
    let scale = zr[0].abs();
    for it in 0..max_iter {
        if rn <= 1e-15 * scale.max(1e-300) * 10.0 {
            return Ok(Collocation { xi_min, h, intervals: nint, z, newton_iterations: it, residual: rn });
        }
        let jac = jacobian(ode, lin, &z, h)?;
        let dz = jac.solve(&r)?;
        let step = max_abs(&dz);
        let mut lambda = 1.0;
        let mut accepted = false;
        for _ in 0..30 {
            let trial: Vec<[f64; 3]> = z
                .iter()
                .enumerate()
                .map(|(k, zk)| [zk[0] - lambda * dz[3 * k], zk[1] - lambda * dz[3 * k + 1], zk[2] - lambda * dz[3 * k + 2]])
                .collect();
            if trial.iter().any(|t| !(ode.n_left + t[0] > 0.0)) {
                lambda *= 0.5;
                continue;
            }
            let rt = residual(ode, lin, &trial, h, target);
            let rtn = max_abs(&rt);
            if rtn.is_finite() && (rtn < rn || rtn <= 1e-14 * scale) {
                z = trial;
                r = rt;
                rn = rtn;
                accepted = true;
                break;
            }
            lambda *= 0.5;
        }
        if !accepted {
            return Err(Error::NoConvergence { solver: "profile collocation Newton", iterations: it, residual: rn });
        }
        if step * lambda <= 1e-14 * scale {
            return Ok(Collocation { xi_min, h, intervals: nint, z, newton_iterations: it + 1, residual: rn });
        }
    }
    Err(Error::NoConvergence { solver: "profile collocation Newton", iterations: max_iter, residual: rn })
}
