//! Traveling-wave reduction of the NSP system.
//!
//! With `xi = x - s t` the mass equation integrates to `m = m_- + s (n - n_-)`,
//! so `u - s = j / n` with the constant mass flux `j`. The electric force is a
//! derivative, `n phi' = (psi^2/2 - exp(-phi))'` with `psi = phi'`, because of the
//! Poisson equation. Integrating the momentum equation once from the left state
//! gives `u' = G(n, phi, psi)`:
//!
//! ```text
//! G = -s (m - m_-) + m^2/n - m_-^2/n_- + A (n - n_-) - psi^2/2 + exp(-phi) - n_-
//!   = (n - n_-) (A - j^2 / (n n_-)) - psi^2/2 + n_- expm1(-(phi - phi_-)),
//! n' = n^2 G / (-j),   phi' = psi,   psi' = n - exp(-phi).
//! ```
//!
//! The second line is the same function written without cancellation near the
//! left state; the solver works with deviations from that state.

use nalgebra::Matrix3;

use crate::error::{Error, Result};
use crate::riemann::ShockConnection;

/// State of the reduced system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfilePoint {
    pub n: f64,
    pub phi: f64,
    pub psi: f64,
}

/// Constants of the reduced system for one connection.
#[derive(Debug, Clone, Copy)]
pub struct ProfileOde {
    pub a: f64,
    pub s: f64,
    pub j: f64,
    pub n_left: f64,
    pub m_left: f64,
    pub phi_left: f64,
    pub n_right: f64,
    pub phi_right: f64,
}

/// Every derivative of the profile that the ansatz and residual code needs,
/// evaluated from the state through the ODE.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileJet {
    pub n: f64,
    pub m: f64,
    pub u: f64,
    pub phi: f64,
    pub dn: f64,
    pub dm: f64,
    pub du: f64,
    pub dphi: f64,
    pub d2n: f64,
    pub d2m: f64,
    pub d2u: f64,
    pub d2phi: f64,
    pub d3phi: f64,
}

impl ProfileOde {
    pub fn new(conn: &ShockConnection) -> Self {
        Self {
            a: conn.temperature,
            s: conn.speed,
            j: conn.mass_flux,
            n_left: conn.left.n_bar,
            m_left: conn.left.m_bar,
            phi_left: conn.left.phi_bar,
            n_right: conn.right.n_bar,
            phi_right: conn.right.phi_bar,
        }
    }

    /// `G` from deviations `(dn, dphi)` relative to the left state.
    #[inline]
    pub fn g_dev(&self, dn: f64, dphi: f64, psi: f64) -> f64 {
        let n = self.n_left + dn;
        dn * (self.a - self.j * self.j / (n * self.n_left)) - 0.5 * psi * psi + self.n_left * (-dphi).exp_m1()
    }

    /// Right-hand side in deviation variables `z = (n - n_-, phi - phi_-, psi)`.
    #[inline]
    pub fn rhs_dev(&self, z: [f64; 3]) -> [f64; 3] {
        let n = self.n_left + z[0];
        let g = self.g_dev(z[0], z[1], z[2]);
        [n * n * g / (-self.j), z[2], z[0] - self.n_left * (-z[1]).exp_m1()]
    }

    /// Jacobian of [`Self::rhs_dev`].
    pub fn jacobian_dev(&self, z: [f64; 3]) -> Matrix3<f64> {
        let n = self.n_left + z[0];
        let g = self.g_dev(z[0], z[1], z[2]);
        let e = self.n_left * (-z[1]).exp();
        let gn = self.a - self.j * self.j / (n * n);
        let gphi = -e;
        let gpsi = -z[2];
        let k = 1.0 / (-self.j);
        Matrix3::new(
            (2.0 * n * g + n * n * gn) * k,
            n * n * gphi * k,
            n * n * gpsi * k,
            0.0,
            0.0,
            1.0,
            1.0,
            e,
            0.0,
        )
    }

    pub fn right_equilibrium_dev(&self) -> [f64; 3] {
        [self.n_right - self.n_left, self.phi_right - self.phi_left, 0.0]
    }

    pub fn rhs(&self, p: &ProfilePoint) -> Result<ProfilePoint> {
        if !(p.n > 0.0) {
            return Err(Error::InvalidArgument(format!("profile density must be positive, got {}", p.n)));
        }
        let m = self.m_left + self.s * (p.n - self.n_left);
        let u = m / p.n;
        if (self.s - u).abs() < 1e-14 * (1.0 + self.s.abs()) {
            return Err(Error::InvalidArgument(format!("sonic point: s - u = {:e}", self.s - u)));
        }
        let d = self.rhs_dev([p.n - self.n_left, p.phi - self.phi_left, p.psi]);
        Ok(ProfilePoint { n: d[0], phi: d[1], psi: d[2] })
    }

    /// All derivatives at a state on the orbit.
    pub fn jet(&self, dn: f64, dphi: f64, psi: f64) -> ProfileJet {
        let n = self.n_left + dn;
        let phi = self.phi_left + dphi;
        let e = self.n_left * (-dphi).exp();
        let g = self.g_dev(dn, dphi, psi);
        let k = 1.0 / (-self.j);
        let n1 = n * n * g * k;
        let psi1 = dn - self.n_left * (-dphi).exp_m1();
        let gn = self.a - self.j * self.j / (n * n);
        let g1 = gn * n1 - e * psi - psi * psi1;
        let n2 = (2.0 * n * n1 * g + n * n * g1) * k;
        let m = self.m_left + self.s * dn;
        ProfileJet {
            n,
            m,
            u: m / n,
            phi,
            dn: n1,
            dm: self.s * n1,
            du: g,
            dphi: psi,
            d2n: n2,
            d2m: self.s * n2,
            d2u: g1,
            d2phi: psi1,
            d3phi: n1 + e * psi,
        }
    }
}

/// Derivative of the reduced state; see the module docs for the equations.
pub fn profile_rhs(p: &ProfilePoint, conn: &ShockConnection) -> Result<ProfilePoint> {
    ProfileOde::new(conn).rhs(p)
}

/// Real eigenpairs `(lambda, left eigenvector)` of a 3x3 matrix.
pub(crate) fn left_eigenpairs(m: &Matrix3<f64>) -> Result<Vec<(f64, [f64; 3])>> {
    let ev = m.complex_eigenvalues();
    let mut out = Vec::with_capacity(3);
    for z in ev.iter() {
        if z.im.abs() > 1e-10 * (1.0 + z.re.abs()) {
            return Err(Error::Inadmissible(format!("complex linearization eigenvalue {} + {}i", z.re, z.im)));
        }
        let lam = z.re;
        let mt = m.transpose() - Matrix3::identity() * lam;
        let rows = [mt.row(0).transpose(), mt.row(1).transpose(), mt.row(2).transpose()];
        let mut best = nalgebra::Vector3::zeros();
        for (a, b) in [(0, 1), (0, 2), (1, 2)] {
            let c = rows[a].cross(&rows[b]);
            if c.norm() > best.norm() {
                best = c;
            }
        }
        let nrm = best.norm();
        if nrm == 0.0 {
            return Err(Error::Inadmissible("degenerate linearization".into()));
        }
        best /= nrm;
        out.push((lam, [best[0], best[1], best[2]]));
    }
    out.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::riemann::{hugoniot_connect, EndState};

    fn conn() -> ShockConnection {
        hugoniot_connect(&EndState::new(1.1, 0.0).unwrap(), 1.0, 1.0).unwrap()
    }

    #[test]
    fn equilibria_are_fixed_points() {
        let c = conn();
        let l = profile_rhs(&ProfilePoint { n: c.left.n_bar, phi: c.left.phi_bar, psi: 0.0 }, &c).unwrap();
        assert_eq!((l.n, l.phi, l.psi), (0.0, 0.0, 0.0));
        let r = profile_rhs(&ProfilePoint { n: c.right.n_bar, phi: c.right.phi_bar, psi: 0.0 }, &c).unwrap();
        assert!(r.n.abs() < 1e-12 && r.phi.abs() < 1e-12 && r.psi.abs() < 1e-12);
    }

    #[test]
    fn plain_and_deviation_forms_agree() {
        let c = conn();
        let ode = ProfileOde::new(&c);
        let (n, phi, psi): (f64, f64, f64) = (1.05, -0.04, 0.003);
        let m = c.left.m_bar + c.speed * (n - c.left.n_bar);
        let g_plain = -c.speed * (m - c.left.m_bar) + m * m / n - c.left.m_bar.powi(2) / c.left.n_bar
            + c.temperature * (n - c.left.n_bar)
            - 0.5 * psi * psi
            + (-phi).exp()
            - c.left.n_bar;
        let g = ode.g_dev(n - c.left.n_bar, phi - c.left.phi_bar, psi);
        assert!((g - g_plain).abs() < 1e-14);
    }

    #[test]
    fn jacobian_matches_finite_differences() {
        let ode = ProfileOde::new(&conn());
        let z = [-0.03, 0.02, 0.001];
        let jac = ode.jacobian_dev(z);
        let h = 1e-7;
        for c in 0..3 {
            let mut zp = z;
            let mut zm = z;
            zp[c] += h;
            zm[c] -= h;
            let fp = ode.rhs_dev(zp);
            let fm = ode.rhs_dev(zm);
            for r in 0..3 {
                let fd = (fp[r] - fm[r]) / (2.0 * h);
                assert!((fd - jac[(r, c)]).abs() < 1e-7, "({r},{c}) {fd} vs {}", jac[(r, c)]);
            }
        }
    }
}
