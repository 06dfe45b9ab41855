//! Conservative central scheme shared by the periodic cells and the line solver.
//!
//! The momentum flux uses `n phi_x = (phi_x^2/2 - exp(-phi))_x`, valid whenever
//! `phi_xx = n - exp(-phi)`, so both equations are in flux form:
//!
//! ```text
//! G_{i+1/2} = (m_i + m_{i+1}) / 2
//! F_{i+1/2} = (K_i + K_{i+1}) / 2 - (u_{i+1} - u_i)/h - ((phi_{i+1} - phi_i)/h)^2 / 2
//! K = m^2/n + A n + exp(-phi)
//! ```

/// Stable explicit step: `min(cfl_h h / max(|u| + sqrt(A+1)), cfl_p h^2)`.
pub fn stable_dt(n: &[f64], m: &[f64], a: f64, h: f64, cfl_h: f64, cfl_p: f64) -> f64 {
    let c = (a + 1.0).sqrt();
    let vmax = n.iter().zip(m).fold(0.0_f64, |acc, (n, m)| acc.max((m / n).abs() + c));
    (cfl_h * h / vmax).min(cfl_p * h * h)
}

#[inline]
fn k_term(n: f64, m: f64, phi: f64, a: f64) -> f64 {
    m * m / n + a * n + (-phi).exp()
}

/// Mass and momentum fluxes between nodes `i` and `i+1`.
#[inline]
pub fn face_fluxes(a: f64, h: f64, l: (f64, f64, f64), r: (f64, f64, f64)) -> (f64, f64) {
    let (nl, ml, pl) = l;
    let (nr, mr, pr) = r;
    let g = 0.5 * (ml + mr);
    let e = (pr - pl) / h;
    let f = 0.5 * (k_term(nl, ml, pl, a) + k_term(nr, mr, pr, a)) - (mr / nr - ml / nl) / h - 0.5 * e * e;
    (g, f)
}

/// Time derivatives on a periodic cell of `n.len()` distinct nodes.
pub fn rhs_periodic(a: f64, h: f64, n: &[f64], m: &[f64], phi: &[f64], dn: &mut [f64], dm: &mut [f64]) {
    let len = n.len();
    let mut gf = Vec::with_capacity(len);
    for i in 0..len {
        let ip = if i + 1 == len { 0 } else { i + 1 };
        gf.push(face_fluxes(a, h, (n[i], m[i], phi[i]), (n[ip], m[ip], phi[ip])));
    }
    for i in 0..len {
        let im = if i == 0 { len - 1 } else { i - 1 };
        dn[i] = -(gf[i].0 - gf[im].0) / h;
        dm[i] = -(gf[i].1 - gf[im].1) / h;
    }
}

/// Time derivatives at interior nodes of a line grid; end entries are set to zero.
pub fn rhs_line(a: f64, h: f64, n: &[f64], m: &[f64], phi: &[f64], dn: &mut [f64], dm: &mut [f64]) -> (f64, f64, f64, f64) {
    let len = n.len();
    let mut prev = face_fluxes(a, h, (n[0], m[0], phi[0]), (n[1], m[1], phi[1]));
    let first = prev;
    dn[0] = 0.0;
    dm[0] = 0.0;
    for i in 1..len - 1 {
        let next = face_fluxes(a, h, (n[i], m[i], phi[i]), (n[i + 1], m[i + 1], phi[i + 1]));
        dn[i] = -(next.0 - prev.0) / h;
        dm[i] = -(next.1 - prev.1) / h;
        prev = next;
    }
    dn[len - 1] = 0.0;
    dm[len - 1] = 0.0;
    // boundary face fluxes (left mass, left momentum, right mass, right momentum)
    (first.0, first.1, prev.0, prev.1)
}

/// The periodic update written for the deviations `(rho, w, varphi)` from a
/// quasineutral constant state `(n_bar, m_bar, -ln n_bar)`. Constant parts of
/// the fluxes cancel in the differences, so round-off scales with the deviation.
#[allow(clippy::too_many_arguments)]
pub fn rhs_periodic_deviation(
    a: f64,
    h: f64,
    n_bar: f64,
    m_bar: f64,
    rho: &[f64],
    w: &[f64],
    varphi: &[f64],
    drho: &mut [f64],
    dw: &mut [f64],
) {
    let len = rho.len();
    let k: Vec<f64> = (0..len)
        .map(|i| {
            let (r, q) = (rho[i], w[i]);
            (2.0 * m_bar * q * n_bar + q * q * n_bar - m_bar * m_bar * r) / (n_bar * (n_bar + r)) + a * r + n_bar * (-varphi[i]).exp_m1()
        })
        .collect();
    let v: Vec<f64> = (0..len).map(|i| (w[i] * n_bar - m_bar * rho[i]) / (n_bar * (n_bar + rho[i]))).collect();
    let mut gf = Vec::with_capacity(len);
    for i in 0..len {
        let ip = if i + 1 == len { 0 } else { i + 1 };
        let e = (varphi[ip] - varphi[i]) / h;
        gf.push((0.5 * (w[i] + w[ip]), 0.5 * (k[i] + k[ip]) - (v[ip] - v[i]) / h - 0.5 * e * e));
    }
    for i in 0..len {
        let im = if i == 0 { len - 1 } else { i - 1 };
        drho[i] = -(gf[i].0 - gf[im].0) / h;
        dw[i] = -(gf[i].1 - gf[im].1) / h;
    }
}
