use super::{AnsatzFields, ErrorTerms};
use crate::error::{Error, Result};
use crate::periodic::scheme::rhs_line;

/// Residuals of an ansatz in the discrete line scheme: centred time differences
/// of three snapshots minus the semi-discrete right-hand side at the middle one,
/// and the discrete Poisson-Boltzmann defect.
///
/// ```text
/// h1 = (n(t+D) - n(t-D)) / 2D - R_n(t)
/// h3 = D2 phi - n + exp(-phi)
/// h2 = (m(t+D) - m(t-D)) / 2D - R_m(t) - D1 h3
/// ```
///
/// The last term converts the scheme's electric flux `exp(-phi) - phi_x^2/2`
/// back to `n - phi_xx - phi_x^2/2`, which it equals only when `h3 = 0`.
/// The end nodes carry zero.
pub fn residual_error_terms(prev: &AnsatzFields, cur: &AnsatzFields, next: &AnsatzFields, temperature: f64) -> Result<ErrorTerms> {
    let dt = cur.t - prev.t;
    if !(dt > 0.0) || ((next.t - cur.t) - dt).abs() > 1e-9 * dt {
        return Err(Error::InvalidArgument(format!(
            "snapshots at {}, {}, {} are not equally spaced",
            prev.t, cur.t, next.t
        )));
    }
    let grid = *cur.n_sharp.grid();
    let h = grid.spacing();
    let len = grid.n_points();
    let n = cur.n_sharp.values();
    let m = cur.m_sharp.values();
    let phi = cur.phi_sharp.values();
    let mut rn = vec![0.0; len];
    let mut rm = vec![0.0; len];
    rhs_line(temperature, h, n, m, phi, &mut rn, &mut rm);
    let mut h1 = vec![0.0; len];
    let mut h2 = vec![0.0; len];
    let mut h3 = vec![0.0; len];
    let (np, nn) = (prev.n_sharp.values(), next.n_sharp.values());
    let (mp, mn) = (prev.m_sharp.values(), next.m_sharp.values());
    for i in 1..len - 1 {
        h1[i] = (nn[i] - np[i]) / (2.0 * dt) - rn[i];
        h2[i] = (mn[i] - mp[i]) / (2.0 * dt) - rm[i];
        h3[i] = (phi[i + 1] - 2.0 * phi[i] + phi[i - 1]) / (h * h) - n[i] + (-phi[i]).exp();
    }
    // the scheme's electric flux assumes h3 = 0; restore the (A+1) n - phi_xx form
    for i in 2..len - 2 {
        h2[i] -= (h3[i + 1] - h3[i - 1]) / (2.0 * h);
    }
    ErrorTerms::from_values(cur.t, grid, [h1, h2, h3])
}
