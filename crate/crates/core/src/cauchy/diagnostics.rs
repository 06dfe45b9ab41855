use crate::error::{Error, Result};
use crate::profile::ShockProfile;

use super::CauchyState;

/// Diagnostics at one output time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiagnosticRecord {
    pub t: f64,
    /// Sup-distance to the reference wave over the diagnostic window.
    pub dist_linf: f64,
    /// Least-squares translate of the profile matching the density (shock runs only).
    pub shift_obs: Option<f64>,
    /// `H^1` norm of `(n, m, phi)` minus the ansatz.
    pub h1_pert_norm: f64,
    pub phi_l2: f64,
    /// `L^2` norms of the cumulative integrals of the density and momentum perturbations.
    pub anti_phi: f64,
    pub anti_psi: f64,
    /// Integrals of the density and momentum perturbations.
    pub mass_total: f64,
    pub momentum_total: f64,
    pub poisson_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct DiagnosticsSeries {
    pub records: Vec<DiagnosticRecord>,
}

impl DiagnosticsSeries {
    pub fn times(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.t).collect()
    }

    pub fn distances(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.dist_linf).collect()
    }

    pub fn last(&self) -> Option<&DiagnosticRecord> {
        self.records.last()
    }

    /// Peak distance over `t >= transient`, the terminal distance and their ratio.
    pub fn post_transient_reduction(&self, transient: f64) -> Result<(f64, f64, f64)> {
        let last = self.last().ok_or_else(|| Error::InvalidArgument("empty diagnostics series".into()))?;
        let peak = self.records.iter().filter(|r| r.t >= transient).map(|r| r.dist_linf).fold(0.0, f64::max);
        Ok((peak, last.dist_linf, peak / last.dist_linf))
    }

    /// Largest difference of the distance series at common output times.
    pub fn max_distance_gap(&self, other: &Self) -> Result<f64> {
        let mut gap = 0.0_f64;
        let mut matched = 0;
        for r in &self.records {
            if let Some(o) = other.records.iter().find(|o| (o.t - r.t).abs() <= 1e-9 * r.t.abs().max(1.0)) {
                gap = gap.max((r.dist_linf - o.dist_linf).abs());
                matched += 1;
            }
        }
        if matched == 0 {
            return Err(Error::InvalidArgument("series share no output times".into()));
        }
        Ok(gap)
    }

    /// `max_t ||(Phi, Psi)(t)|| / (||(Phi, Psi)(0)|| + nu)`.
    pub fn antiderivative_constant(&self, nu: f64) -> f64 {
        let norm = |r: &DiagnosticRecord| r.anti_phi.hypot(r.anti_psi);
        let Some(first) = self.records.first() else { return 0.0 };
        let base = norm(first) + nu;
        self.records.iter().map(|r| norm(r) / base).fold(0.0, f64::max)
    }
}

const GOLDEN: f64 = 0.618_033_988_749_894_8;

/// Translate `z` minimizing `sum (n_i - n^s(x_i - s t - z))^2` over nodes within
/// `half_width` of `s t + guess`: a scan at half the grid spacing over
/// `guess +- 5`, refined by golden-section search to a hundredth of the spacing.
pub fn observed_shift(state: &CauchyState, profile: &ShockProfile, guess: f64, half_width: f64) -> f64 {
    let g = state.grid;
    let h = g.spacing();
    let s = profile.speed();
    let centre = s * state.t + guess;
    let nodes: Vec<(f64, f64)> = g
        .points()
        .into_iter()
        .zip(state.n.values())
        .filter(|(x, _)| (x - centre).abs() <= half_width)
        .map(|(x, n)| (x, *n))
        .collect();
    let cost = |z: f64| -> f64 {
        nodes.iter().map(|(x, n)| (n - profile.sample(x - s * state.t - z).jet.n).powi(2)).sum()
    };
    let steps = (10.0 / (0.5 * h)).ceil() as usize;
    let mut best = (guess, cost(guess));
    for i in 0..=steps {
        let z = guess - 5.0 + i as f64 * 0.5 * h;
        let c = cost(z);
        if c < best.1 {
            best = (z, c);
        }
    }
    let (mut a, mut b) = (best.0 - 0.5 * h, best.0 + 0.5 * h);
    let mut c = b - GOLDEN * (b - a);
    let mut d = a + GOLDEN * (b - a);
    let (mut fc, mut fd) = (cost(c), cost(d));
    while b - a > 0.01 * h {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - GOLDEN * (b - a);
            fc = cost(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + GOLDEN * (b - a);
            fd = cost(d);
        }
    }
    0.5 * (a + b)
}
