//! Plain-text tables. Numbers are written in positional decimal with 17
//! significant digits so identical inputs give byte-identical files.

use std::fmt::Write as _;

use crate::ansatz::ErrorTerms;
use crate::cauchy::{CauchyState, DiagnosticsSeries};
use crate::periodic::{cell_grid, PeriodicHistory};
use crate::profile::ShockProfile;
use crate::shifts::{AsymptoticShifts, ShiftTrajectory};

/// `x` with 17 significant digits and no exponent. Non-finite values are written as
/// `nan`, `inf` or `-inf`.
pub fn fmt_sig17(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}").to_lowercase();
    }
    let mag = x.abs().log10().floor() as i32;
    let decimals = (16 - mag).clamp(0, 340) as usize;
    format!("{x:.decimals$}")
}

/// Header plus rows of optional numbers; `None` becomes an empty field.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<Option<f64>>>,
}

impl Table {
    pub fn new(headers: &[&str]) -> Self {
        Self { headers: headers.iter().map(|h| h.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: &[f64]) {
        self.rows.push(row.iter().map(|v| Some(*v)).collect());
    }

    pub fn push_optional(&mut self, row: Vec<Option<f64>>) {
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<Option<f64>>> {
        let j = self.headers.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r.get(j).copied().flatten()).collect())
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.headers.join(",");
        out.push('\n');
        for r in &self.rows {
            let cells: Vec<String> = r.iter().map(|v| v.map(fmt_sig17).unwrap_or_default()).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

pub fn profile_table(p: &ShockProfile) -> Table {
    let mut t = Table::new(&["xi", "n_s", "m_s", "u_s", "phi_s", "dn_s", "du_s", "dphi_s"]);
    for (i, x) in p.xi_grid.points().into_iter().enumerate() {
        t.push(&[
            x,
            p.n_s.values()[i],
            p.m_s.values()[i],
            p.u_s.values()[i],
            p.phi_s.values()[i],
            p.dn_s.values()[i],
            p.du_s.values()[i],
            p.dphi_s.values()[i],
        ]);
    }
    t
}

/// `(t, l2_n, l2_m, h1_total)` where the `L^2` norms are of the deviations over one cell.
pub fn history_summary_table(h: &PeriodicHistory) -> Table {
    let mut t = Table::new(&["t", "l2_n", "l2_m", "h1_total"]);
    let dx = h.h();
    let l2 = |v: &[f64]| (dx * v.iter().map(|a| a * a).sum::<f64>()).sqrt();
    for (k, s) in h.snapshots.iter().enumerate() {
        t.push(&[s.t, l2(&s.rho), l2(&s.w), h.h1[k]]);
    }
    t
}

/// Nodal `(x, n, m, phi)` of one snapshot, including the repeated end node.
pub fn history_snapshot_table(h: &PeriodicHistory, k: usize) -> Table {
    let mut t = Table::new(&["x", "n", "m", "phi"]);
    let s = &h.snapshots[k];
    let cells = s.n.len();
    let g = cell_grid(h.period, cells).expect("history cells form a valid grid");
    for (i, x) in g.points().into_iter().enumerate() {
        let j = i % cells;
        t.push(&[x, s.n[j], s.m[j], s.phi[j]]);
    }
    t
}

pub fn shift_table(tr: &ShiftTrajectory) -> Table {
    let mut t = Table::new(&["t", "X", "Y", "Xprime", "Yprime"]);
    for (k, s) in tr.states.iter().enumerate() {
        t.push(&[s.t, s.x, s.y, tr.x_prime[k], tr.y_prime[k]]);
    }
    t
}

/// `key = value` lines for the initial and limiting shifts.
pub fn asymptotic_report(x0: f64, y0: f64, asy: &AsymptoticShifts) -> String {
    let mut s = String::new();
    for (k, v) in [
        ("X0", x0),
        ("Y0", y0),
        ("X_inf", asy.x_inf),
        ("Y_inf", asy.y_inf),
        ("zero_mass_residual", asy.zero_mass_residual),
    ] {
        let _ = writeln!(s, "{k} = {}", fmt_sig17(v));
    }
    s
}

pub fn residual_norms_table(terms: &[ErrorTerms]) -> Table {
    let mut t = Table::new(&["t", "h1_h2", "h2_h2", "h3_h2", "H1_l2", "H2_l2"]);
    for e in terms {
        let n = &e.norms;
        t.push(&[e.t, n.h2[0], n.h2[1], n.h2[2], n.anti_l2[0], n.anti_l2[1]]);
    }
    t
}

pub fn diagnostics_table(series: &DiagnosticsSeries) -> Table {
    let mut t = Table::new(&[
        "t",
        "dist_linf",
        "shift_obs",
        "h1_pert_norm",
        "phi_l2",
        "anti_phi",
        "anti_psi",
        "mass_total",
        "momentum_total",
    ]);
    for r in &series.records {
        t.push_optional(vec![
            Some(r.t),
            Some(r.dist_linf),
            r.shift_obs,
            Some(r.h1_pert_norm),
            Some(r.phi_l2),
            Some(r.anti_phi),
            Some(r.anti_psi),
            Some(r.mass_total),
            Some(r.momentum_total),
        ]);
    }
    t
}

pub fn state_table(s: &CauchyState) -> Table {
    let mut t = Table::new(&["x", "n", "m", "u", "phi"]);
    for (i, x) in s.grid.points().into_iter().enumerate() {
        let (n, m) = (s.n.values()[i], s.m.values()[i]);
        t.push(&[x, n, m, m / n, s.phi.values()[i]]);
    }
    t
}
