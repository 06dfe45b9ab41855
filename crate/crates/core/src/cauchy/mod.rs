//! The NSP Cauchy problem on a truncated line `[-L, L]`, with the end nodes
//! pinned to the ansatz built from co-evolved periodic cells.

mod diagnostics;
mod solver;

pub use diagnostics::{observed_shift, DiagnosticRecord, DiagnosticsSeries};
pub use solver::{init_rarefaction, init_shock, run_rarefaction, run_shock, CauchyRun, HorizonReport, SolverConfig};

use crate::error::{Error, Result};
use crate::numerics::{BoundaryKind, Grid1D, SpatialField};
use crate::periodic::poisson::{dirichlet_residual, solve_dirichlet};
use crate::periodic::scheme::rhs_line;

#[derive(Debug, Clone, PartialEq)]
pub struct CauchyState {
    pub t: f64,
    pub grid: Grid1D,
    pub n: SpatialField,
    pub m: SpatialField,
    pub phi: SpatialField,
}

impl CauchyState {
    /// Builds a state from density and momentum, solving for the potential with
    /// the given end values.
    pub fn new(t: f64, n: SpatialField, m: SpatialField, phi_ends: (f64, f64), tol: f64) -> Result<Self> {
        let grid = *n.grid();
        if m.grid() != &grid {
            return Err(Error::ShapeMismatch("density and momentum live on different grids".into()));
        }
        check_positive(n.values(), &grid, t)?;
        let mut phi: Vec<f64> = n.values().iter().map(|v| -v.ln()).collect();
        let last = phi.len() - 1;
        phi[0] = phi_ends.0;
        phi[last] = phi_ends.1;
        solve_dirichlet(n.values(), &mut phi, grid.spacing(), tol)?;
        Ok(Self { t, grid, n, m, phi: SpatialField::new(grid, phi, BoundaryKind::Line)? })
    }

    pub fn u(&self) -> SpatialField {
        let v = self.n.values().iter().zip(self.m.values()).map(|(n, m)| m / n).collect();
        SpatialField::new(self.grid, v, BoundaryKind::Line).expect("same grid")
    }

    /// Largest interior Poisson-Boltzmann defect of the stored potential.
    pub fn poisson_residual(&self) -> f64 {
        dirichlet_residual(self.n.values(), self.phi.values(), self.grid.spacing()).iter().fold(0.0, |a, v| a.max(v.abs()))
    }

    /// `h * sum` of density and momentum over the interior nodes.
    pub fn interior_totals(&self) -> (f64, f64) {
        let h = self.grid.spacing();
        let len = self.grid.n_points();
        let n: f64 = self.n.values()[1..len - 1].iter().sum();
        let m: f64 = self.m.values()[1..len - 1].iter().sum();
        (h * n, h * m)
    }

    /// Largest stable step for this state.
    pub fn stable_dt(&self, temperature: f64, cfl_h: f64, cfl_p: f64) -> f64 {
        crate::periodic::scheme::stable_dt(self.n.values(), self.m.values(), temperature, self.grid.spacing(), cfl_h, cfl_p)
    }
}

/// `(n, m, phi)` imposed at the two end nodes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryData {
    pub left: [f64; 3],
    pub right: [f64; 3],
}

impl BoundaryData {
    pub fn constant(n: f64, m: f64, phi: f64) -> Self {
        Self { left: [n, m, phi], right: [n, m, phi] }
    }
}

/// Mass and momentum that entered through the two end faces during one step.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct StepFluxes {
    pub mass: f64,
    pub momentum: f64,
}

fn check_positive(n: &[f64], grid: &Grid1D, t: f64) -> Result<()> {
    match n.iter().enumerate().find(|(_, v)| !(**v > 0.0)) {
        Some((i, v)) => Err(Error::PositivityLoss { x: grid.point(i), n: *v, t }),
        None => Ok(()),
    }
}

fn rhs(a: f64, h: f64, n: &[f64], m: &[f64], phi: &[f64]) -> (Vec<f64>, Vec<f64>, (f64, f64)) {
    let mut dn = vec![0.0; n.len()];
    let mut dm = vec![0.0; n.len()];
    let (gl, fl, gr, fr) = rhs_line(a, h, n, m, phi, &mut dn, &mut dm);
    (dn, dm, (gl - gr, fl - fr))
}

fn finish(grid: &Grid1D, t: f64, mut n: Vec<f64>, mut m: Vec<f64>, mut phi: Vec<f64>, bc: &BoundaryData, tol: f64) -> Result<(Vec<f64>, Vec<f64>, Vec<f64>)> {
    let last = n.len() - 1;
    [n[0], m[0], phi[0]] = bc.left;
    [n[last], m[last], phi[last]] = bc.right;
    check_positive(&n, grid, t)?;
    if n.iter().chain(&m).any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("line update"));
    }
    solve_dirichlet(&n, &mut phi, grid.spacing(), tol)?;
    Ok((n, m, phi))
}

/// One SSP-RK2 step of the line scheme. The end nodes take `stage` after the
/// Euler predictor and `end` after the corrector; the potential is re-solved
/// at each stage.
pub fn ssp_step(
    state: &CauchyState,
    dt: f64,
    temperature: f64,
    stage: &BoundaryData,
    end: &BoundaryData,
    tol: f64,
) -> Result<(CauchyState, StepFluxes)> {
    let g = state.grid;
    let h = g.spacing();
    let t1 = state.t + dt;
    let (n0, m0, p0) = (state.n.values(), state.m.values(), state.phi.values());
    let (dn, dm, in0) = rhs(temperature, h, n0, m0, p0);
    let n1: Vec<f64> = n0.iter().zip(&dn).map(|(a, b)| a + dt * b).collect();
    let m1: Vec<f64> = m0.iter().zip(&dm).map(|(a, b)| a + dt * b).collect();
    let (n1, m1, p1) = finish(&g, t1, n1, m1, p0.to_vec(), stage, tol)?;
    let (dn, dm, in1) = rhs(temperature, h, &n1, &m1, &p1);
    let n2: Vec<f64> = (0..n0.len()).map(|i| 0.5 * (n0[i] + n1[i] + dt * dn[i])).collect();
    let m2: Vec<f64> = (0..n0.len()).map(|i| 0.5 * (m0[i] + m1[i] + dt * dm[i])).collect();
    let (n2, m2, p2) = finish(&g, t1, n2, m2, p1, end, tol)?;
    let fluxes = StepFluxes { mass: 0.5 * dt * (in0.0 + in1.0), momentum: 0.5 * dt * (in0.1 + in1.1) };
    Ok((
        CauchyState {
            t: t1,
            grid: g,
            n: SpatialField::new(g, n2, BoundaryKind::Line)?,
            m: SpatialField::new(g, m2, BoundaryKind::Line)?,
            phi: SpatialField::new(g, p2, BoundaryKind::Line)?,
        },
        fluxes,
    ))
}
