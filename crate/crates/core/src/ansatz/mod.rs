//! Quadratic ansatzes around a shock profile or a smoothed rarefaction, blending
//! the left and right periodic solutions with the wave's own weight, and the
//! residuals they leave in the NSP system.

mod differencing;
mod rarefaction;
mod remainder;
mod shock;
mod smooth;

pub use differencing::residual_error_terms;
pub use rarefaction::{build_rarefaction_ansatz, rarefaction_error_terms};
pub use remainder::{remainder_decay_checks, catalogue_remainders, RemainderCheck, RemainderReport, RemainderSample};
pub use shock::{build_shock_ansatz, shock_error_terms, ShiftSample};
pub use smooth::{approx_rarefaction, burgers_jet, burgers_smooth, BurgersJet, RarefactionSample, SmoothRarefaction};

use crate::error::{Error, Result};
use crate::numerics::{BoundaryKind, Grid1D, SpatialField};
use crate::periodic::CellView;

/// Ansatz fields on a line grid at one time.
#[derive(Debug, Clone, PartialEq)]
pub struct AnsatzFields {
    pub t: f64,
    pub n_sharp: SpatialField,
    pub m_sharp: SpatialField,
    pub u_sharp: SpatialField,
    pub phi_sharp: SpatialField,
}

/// Norms attached to a residual triple and its two antiderivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualNorms {
    pub h2: [f64; 3],
    pub l2: [f64; 3],
    pub anti_l2: [f64; 2],
}

impl ResidualNorms {
    pub fn combined_h2(&self) -> f64 {
        self.h2.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn combined_anti_l2(&self) -> f64 {
        self.anti_l2.iter().map(|v| v * v).sum::<f64>().sqrt()
    }
}

/// Residual triple `(h1, h2, h3)` or `(k1, k2, k3)`, with the cumulative
/// integrals of the first two from the left end of the line.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorTerms {
    pub t: f64,
    pub terms: [SpatialField; 3],
    pub antiderivatives: [SpatialField; 2],
    pub norms: ResidualNorms,
}

impl ErrorTerms {
    pub(crate) fn from_values(t: f64, grid: Grid1D, values: [Vec<f64>; 3]) -> Result<Self> {
        let [a, b, c] = values;
        let terms = [
            SpatialField::new(grid, a, BoundaryKind::Line)?,
            SpatialField::new(grid, b, BoundaryKind::Line)?,
            SpatialField::new(grid, c, BoundaryKind::Line)?,
        ];
        let antiderivatives = [terms[0].cumulative(), terms[1].cumulative()];
        let norms = ResidualNorms {
            h2: [terms[0].h2()?, terms[1].h2()?, terms[2].h2()?],
            l2: [terms[0].l2(), terms[1].l2(), terms[2].l2()],
            anti_l2: [antiderivatives[0].l2(), antiderivatives[1].l2()],
        };
        Ok(Self { t, terms, antiderivatives, norms })
    }
}

pub(crate) fn common_time(minus: &CellView, plus: &CellView) -> Result<f64> {
    let (a, b) = (minus.state.t, plus.state.t);
    if (a - b).abs() > 1e-9 * a.abs().max(1.0) {
        return Err(Error::InvalidArgument(format!("periodic states are at different times {a} and {b}")));
    }
    Ok(a)
}

pub(crate) fn line_field(grid: Grid1D, v: Vec<f64>) -> Result<SpatialField> {
    SpatialField::new(grid, v, BoundaryKind::Line)
}

/// `(M + b)^2/(N + a) - M^2/N` without cancellation.
#[inline]
pub(crate) fn convective_increment(m: f64, n: f64, a: f64, b: f64) -> f64 {
    (2.0 * m * b * n + b * b * n - m * m * a) / (n * (n + a))
}

/// `(M + b)/(N + a) - M/N` without cancellation.
#[inline]
pub(crate) fn velocity_increment(m: f64, n: f64, a: f64, b: f64) -> f64 {
    (b * n - m * a) / (n * (n + a))
}
