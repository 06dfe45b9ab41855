//! Viscous shock profiles: computation, evaluation at shifted arguments and
//! structural diagnostics.

mod analysis;
mod ode;
mod solve;

pub use analysis::{
    fit_profile_decay, traveling_wave_residual, uniqueness_defect, verify_profile_structure, DecayReport,
    StructureReport, TailFit, TravelingWaveResidual,
};
pub use ode::{profile_rhs, ProfileJet, ProfileOde, ProfilePoint};

use crate::error::{Error, Result};
use crate::numerics::interp::hermite_cell;
use crate::numerics::{BoundaryKind, Grid1D, SpatialField};
use crate::riemann::ShockConnection;

/// Tuning for [`compute_profile`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileOptions {
    pub spacing: f64,
    /// `None` selects `max(200, 10/(theta delta), tail needed for tol)`.
    pub halfwidth: Option<f64>,
    pub tol: f64,
    pub max_newton: usize,
}

impl Default for ProfileOptions {
    fn default() -> Self {
        Self { spacing: 0.05, halfwidth: None, tol: 1e-9, max_newton: 60 }
    }
}

/// Where the profile is anchored.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Normalization {
    pub anchor_xi: f64,
    pub sigma_at_anchor: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverStats {
    pub newton_iterations: usize,
    pub residual: f64,
    pub slow_rate_left: f64,
    pub slow_rate_right: f64,
    pub fast_rate_left: f64,
    pub fast_rate_right: f64,
    pub endpoint_residual: f64,
}

/// Tabulated traveling wave `(n, m, u, phi)(xi)` with first and second derivatives.
#[derive(Debug, Clone)]
pub struct ShockProfile {
    pub xi_grid: Grid1D,
    pub n_s: SpatialField,
    pub m_s: SpatialField,
    pub u_s: SpatialField,
    pub phi_s: SpatialField,
    pub dn_s: SpatialField,
    pub dm_s: SpatialField,
    pub du_s: SpatialField,
    pub dphi_s: SpatialField,
    pub d2n_s: SpatialField,
    pub d2m_s: SpatialField,
    pub d2u_s: SpatialField,
    pub d2phi_s: SpatialField,
    pub connection: ShockConnection,
    pub normalization: Normalization,
    pub stats: SolverStats,
    ode: ProfileOde,
    dev: Vec<[f64; 3]>,
    slope: Vec<[f64; 3]>,
}

/// Profile quantities at one point, including the weight `sigma` and its derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileSample {
    pub jet: ProfileJet,
    pub sigma: f64,
    pub dsigma: f64,
    pub d2sigma: f64,
}

impl ShockProfile {
    pub fn ode(&self) -> &ProfileOde {
        &self.ode
    }

    pub fn speed(&self) -> f64 {
        self.connection.speed
    }

    pub fn strength(&self) -> f64 {
        self.connection.strength
    }

    /// Slowest tail rate, the `theta * delta` of the exponential bounds.
    pub fn slow_rate(&self) -> f64 {
        self.stats.slow_rate_left.min(self.stats.slow_rate_right)
    }

    pub fn halfwidth(&self) -> f64 {
        self.xi_grid.x_max()
    }

    /// `sigma = (n - n_-)/(n_+ - n_-)` on the grid.
    pub fn sigma(&self) -> SpatialField {
        let dn = self.connection.jump_n();
        let v = self.dev.iter().map(|z| z[0] / dn).collect();
        SpatialField::new(self.xi_grid, v, BoundaryKind::Line).expect("finite sigma")
    }

    /// State deviations from the left state, by cubic Hermite interpolation.
    pub fn deviation_at(&self, xi: f64) -> [f64; 3] {
        let g = &self.xi_grid;
        let s = (xi - g.x_min()) / g.spacing();
        let last = g.n_points() - 1;
        if s <= 0.0 {
            return [0.0; 3];
        }
        if s >= last as f64 {
            return self.ode.right_equilibrium_dev();
        }
        let i = (s.floor() as usize).min(last - 1);
        let t = s - i as f64;
        let h = g.spacing();
        let mut out = [0.0; 3];
        for c in 0..3 {
            out[c] = hermite_cell(self.dev[i][c], self.dev[i + 1][c], self.slope[i][c] * h, self.slope[i + 1][c] * h, t, h).0;
        }
        out
    }

    /// Full jet at `xi`; outside the tabulated window the end states are returned.
    pub fn sample(&self, xi: f64) -> ProfileSample {
        let z = self.deviation_at(xi);
        let jet = self.ode.jet(z[0], z[1], z[2]);
        let dn = self.connection.jump_n();
        ProfileSample { jet, sigma: z[0] / dn, dsigma: jet.dn / dn, d2sigma: jet.d2n / dn }
    }
}

/// Computes the profile for `conn`, centred so that `sigma(0) = 1/2`.
pub fn compute_profile(conn: &ShockConnection, opts: &ProfileOptions) -> Result<ShockProfile> {
    let delta = conn.strength;
    if delta < 1e-6 {
        return Err(Error::Inadmissible(format!("shock strength {delta:e} is degenerate (< 1e-6)")));
    }
    if !(opts.spacing > 0.0) || !(opts.tol > 0.0) {
        return Err(Error::InvalidArgument("profile spacing and tolerance must be positive".into()));
    }
    let (r1, r2) = conn.rh_residuals();
    if r1.abs().max(r2.abs()) > 1e-10 {
        return Err(Error::Inadmissible(format!("jump conditions violated ({r1:e}, {r2:e})")));
    }
    let ode = ProfileOde::new(conn);
    let lin = solve::linearize(&ode)?;
    let rate = lin.slow_left.min(lin.slow_right);
    let auto = (200.0_f64).max(10.0 / rate).max(1.2 * (delta / opts.tol).ln().max(0.0) / rate);
    let halfwidth = opts.halfwidth.unwrap_or(auto);
    let col = solve::solve_collocation(&ode, &lin, halfwidth, opts.spacing, opts.max_newton)?;
    let zr = ode.right_equilibrium_dev();
    let endpoint_residual = col.z[0][0].abs().max((col.z[col.intervals][0] - zr[0]).abs());
    if endpoint_residual > opts.tol {
        return Err(Error::NoConvergence {
            solver: "profile tail resolution",
            iterations: col.newton_iterations,
            residual: endpoint_residual,
        });
    }
    let grid = Grid1D::with_spacing(col.xi_min, col.h, col.intervals + 1)?;
    let slope: Vec<[f64; 3]> = col.z.iter().map(|z| ode.rhs_dev(*z)).collect();
    let jets: Vec<ProfileJet> = col.z.iter().map(|z| ode.jet(z[0], z[1], z[2])).collect();
    let field = |f: &dyn Fn(&ProfileJet) -> f64| {
        SpatialField::new(grid, jets.iter().map(f).collect(), BoundaryKind::Line)
    };
    let mid = col.intervals / 2;
    let sigma_mid = col.z[mid][0] / conn.jump_n();
    Ok(ShockProfile {
        xi_grid: grid,
        n_s: field(&|j| j.n)?,
        m_s: field(&|j| j.m)?,
        u_s: field(&|j| j.u)?,
        phi_s: field(&|j| j.phi)?,
        dn_s: field(&|j| j.dn)?,
        dm_s: field(&|j| j.dm)?,
        du_s: field(&|j| j.du)?,
        dphi_s: field(&|j| j.dphi)?,
        d2n_s: field(&|j| j.d2n)?,
        d2m_s: field(&|j| j.d2m)?,
        d2u_s: field(&|j| j.d2u)?,
        d2phi_s: field(&|j| j.d2phi)?,
        connection: *conn,
        normalization: Normalization { anchor_xi: grid.point(mid), sigma_at_anchor: sigma_mid },
        stats: SolverStats {
            newton_iterations: col.newton_iterations,
            residual: col.residual,
            slow_rate_left: lin.slow_left,
            slow_rate_right: lin.slow_right,
            fast_rate_left: lin.fast_left,
            fast_rate_right: lin.fast_right,
            endpoint_residual,
        },
        ode,
        dev: col.z,
        slope,
    })
}
