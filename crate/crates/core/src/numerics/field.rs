//! Sampled fields with second-order difference operators, trapezoid quadrature
//! and discrete Sobolev norms.

use super::grid::Grid1D;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryKind {
    /// `values[n-1]` duplicates `values[0]`; the last node is excluded from sums.
    Periodic,
    Line,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpatialField {
    grid: Grid1D,
    values: Vec<f64>,
    boundary: BoundaryKind,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Norms {
    pub l1: f64,
    pub l2: f64,
    pub linf: f64,
    pub h1: f64,
    pub h2: f64,
}

impl SpatialField {
    pub fn new(grid: Grid1D, values: Vec<f64>, boundary: BoundaryKind) -> Result<Self> {
        if values.len() != grid.n_points() {
            return Err(Error::ShapeMismatch(format!(
                "{} values on a grid of {} points",
                values.len(),
                grid.n_points()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("field values"));
        }
        let mut f = Self { grid, values, boundary };
        if boundary == BoundaryKind::Periodic {
            let n = f.values.len();
            f.values[n - 1] = f.values[0];
        }
        Ok(f)
    }

    pub fn from_fn(grid: Grid1D, boundary: BoundaryKind, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(grid, grid.points().into_iter().map(f).collect(), boundary)
    }

    pub fn zeros(grid: Grid1D, boundary: BoundaryKind) -> Self {
        Self { grid, values: vec![0.0; grid.n_points()], boundary }
    }

    /// Periodic field from the distinct cell values (length `n_points - 1`).
    pub fn periodic_from_cell(grid: Grid1D, cell: &[f64]) -> Result<Self> {
        let mut v = cell.to_vec();
        v.push(*cell.first().ok_or_else(|| Error::InvalidArgument("empty cell".into()))?);
        Self::new(grid, v, BoundaryKind::Periodic)
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }
    pub fn values(&self) -> &[f64] {
        &self.values
    }
    pub fn into_values(self) -> Vec<f64> {
        self.values
    }
    pub fn boundary(&self) -> BoundaryKind {
        self.boundary
    }

    /// Distinct samples: all nodes for line fields, all but the duplicate for periodic ones.
    pub fn distinct(&self) -> &[f64] {
        match self.boundary {
            BoundaryKind::Periodic => &self.values[..self.values.len() - 1],
            BoundaryKind::Line => &self.values,
        }
    }

    fn with_values(&self, values: Vec<f64>) -> Self {
        let mut f = Self { grid: self.grid, values, boundary: self.boundary };
        if f.boundary == BoundaryKind::Periodic {
            let n = f.values.len();
            f.values[n - 1] = f.values[0];
        }
        f
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        self.with_values(self.values.iter().map(|&v| f(v)).collect())
    }

    pub fn zip_map(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(self.with_values(self.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect()))
    }

    pub fn linear_combination(&self, a: f64, other: &Self, b: f64) -> Result<Self> {
        self.zip_map(other, |x, y| a * x + b * y)
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.grid != other.grid || self.boundary != other.boundary {
            return Err(Error::ShapeMismatch("fields live on different grids".into()));
        }
        Ok(())
    }

    /// Second-order first derivative.
    pub fn diff1(&self) -> Result<Self> {
        let n = self.values.len();
        if n < 3 {
            return Err(Error::GridTooSmall { min: 3, got: n });
        }
        let h = self.grid.spacing();
        let v = &self.values;
        let out = match self.boundary {
            BoundaryKind::Periodic => {
                let m = n - 1;
                let mut o = vec![0.0; n];
                for i in 0..m {
                    let ip = if i + 1 == m { 0 } else { i + 1 };
                    let im = if i == 0 { m - 1 } else { i - 1 };
                    o[i] = (v[ip] - v[im]) / (2.0 * h);
                }
                o
            }
            BoundaryKind::Line => diff1_line(v, h),
        };
        Ok(self.with_values(out))
    }

    /// Second-order second derivative (3-point interior stencil).
    pub fn diff2(&self) -> Result<Self> {
        let n = self.values.len();
        if n < 3 {
            return Err(Error::GridTooSmall { min: 3, got: n });
        }
        let h = self.grid.spacing();
        let v = &self.values;
        let out = match self.boundary {
            BoundaryKind::Periodic => {
                let m = n - 1;
                let mut o = vec![0.0; n];
                for i in 0..m {
                    let ip = if i + 1 == m { 0 } else { i + 1 };
                    let im = if i == 0 { m - 1 } else { i - 1 };
                    o[i] = (v[ip] - 2.0 * v[i] + v[im]) / (h * h);
                }
                o
            }
            BoundaryKind::Line => diff2_line(v, h),
        };
        Ok(self.with_values(out))
    }

    /// Composite trapezoid over `[a, b]`; partial end cells use the linear interpolant.
    pub fn integrate(&self, a: f64, b: f64) -> Result<f64> {
        if a > b {
            return Err(Error::InvalidArgument(format!("integration bounds reversed: [{a}, {b}]")));
        }
        if !self.grid.contains(a) || !self.grid.contains(b) {
            return Err(Error::OutOfRange {
                what: "integration bound",
                value: if self.grid.contains(a) { b } else { a },
                lo: self.grid.x_min(),
                hi: self.grid.x_max(),
            });
        }
        Ok(trapezoid_between(&self.values, self.grid.x_min(), self.grid.spacing(), a, b))
    }

    /// Integral over the full span (one period for periodic fields).
    pub fn integral(&self) -> f64 {
        trapezoid(&self.values, self.grid.spacing())
    }

    /// Cell average for periodic fields, span average for line fields.
    pub fn mean(&self) -> f64 {
        self.integral() / self.grid.len()
    }

    /// `x -> integral from x_min to x` at every node.
    pub fn cumulative(&self) -> Self {
        Self { grid: self.grid, values: cumulative_trapezoid(&self.values, self.grid.spacing()), boundary: BoundaryKind::Line }
    }

    pub fn lp(&self, p: f64) -> f64 {
        if p.is_infinite() {
            return self.linf();
        }
        let g: Vec<f64> = self.values.iter().map(|v| v.abs().powf(p)).collect();
        trapezoid(&g, self.grid.spacing()).powf(1.0 / p)
    }

    pub fn l2(&self) -> f64 {
        let g: Vec<f64> = self.values.iter().map(|v| v * v).collect();
        trapezoid(&g, self.grid.spacing()).sqrt()
    }

    pub fn linf(&self) -> f64 {
        self.values.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    /// Discrete `H^k` norm, derivatives taken with `diff1`/`diff2` and their compositions.
    pub fn hk(&self, k: usize) -> Result<f64> {
        let mut sum = self.l2().powi(2);
        let mut even = self.clone();
        for j in 1..=k {
            if j % 2 == 1 {
                sum += even.diff1()?.l2().powi(2);
            } else {
                even = even.diff2()?;
                sum += even.l2().powi(2);
            }
        }
        Ok(sum.sqrt())
    }

    pub fn h1(&self) -> Result<f64> {
        self.hk(1)
    }
    pub fn h2(&self) -> Result<f64> {
        self.hk(2)
    }

    pub fn norms(&self) -> Result<Norms> {
        Ok(Norms { l1: self.lp(1.0), l2: self.l2(), linf: self.linf(), h1: self.h1()?, h2: self.h2()? })
    }
}

/// Root of the sum of squares of the `H^k` norms of several fields.
pub fn combined_hk(fields: &[&SpatialField], k: usize) -> Result<f64> {
    let mut s = 0.0;
    for f in fields {
        s += f.hk(k)?.powi(2);
    }
    Ok(s.sqrt())
}

pub(crate) fn diff1_line(v: &[f64], h: f64) -> Vec<f64> {
    let n = v.len();
    let mut o = vec![0.0; n];
    for i in 1..n - 1 {
        o[i] = (v[i + 1] - v[i - 1]) / (2.0 * h);
    }
    o[0] = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h);
    o[n - 1] = (3.0 * v[n - 1] - 4.0 * v[n - 2] + v[n - 3]) / (2.0 * h);
    o
}

pub(crate) fn diff2_line(v: &[f64], h: f64) -> Vec<f64> {
    let n = v.len();
    let h2 = h * h;
    let mut o = vec![0.0; n];
    for i in 1..n - 1 {
        o[i] = (v[i + 1] - 2.0 * v[i] + v[i - 1]) / h2;
    }
    if n >= 4 {
        o[0] = (2.0 * v[0] - 5.0 * v[1] + 4.0 * v[2] - v[3]) / h2;
        o[n - 1] = (2.0 * v[n - 1] - 5.0 * v[n - 2] + 4.0 * v[n - 3] - v[n - 4]) / h2;
    } else {
        o[0] = o[1];
        o[n - 1] = o[n - 2];
    }
    o
}

pub(crate) fn trapezoid(v: &[f64], h: f64) -> f64 {
    let n = v.len();
    if n < 2 {
        return 0.0;
    }
    let inner: f64 = v[1..n - 1].iter().sum();
    h * (inner + 0.5 * (v[0] + v[n - 1]))
}

pub(crate) fn cumulative_trapezoid(v: &[f64], h: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(v.len());
    let mut acc = 0.0;
    out.push(0.0);
    for w in v.windows(2) {
        acc += 0.5 * h * (w[0] + w[1]);
        out.push(acc);
    }
    out
}

fn trapezoid_between(v: &[f64], x0: f64, h: f64, a: f64, b: f64) -> f64 {
    let n = v.len();
    let sa = ((a - x0) / h).clamp(0.0, (n - 1) as f64);
    let sb = ((b - x0) / h).clamp(0.0, (n - 1) as f64);
    let snap = |s: f64| if (s - s.round()).abs() < 1e-9 { s.round() } else { s };
    let (sa, sb) = (snap(sa), snap(sb));
    if sb <= sa {
        return 0.0;
    }
    let lerp = |s: f64| {
        let i = (s.floor() as usize).min(n - 2);
        let t = s - i as f64;
        v[i] * (1.0 - t) + v[i + 1] * t
    };
    let ia = sa.ceil() as usize;
    let ib = sb.floor() as usize;
    if ia > ib {
        // both bounds inside the same cell
        return 0.5 * (lerp(sa) + lerp(sb)) * (sb - sa) * h;
    }
    let mut total = 0.5 * (lerp(sa) + v[ia]) * (ia as f64 - sa) * h;
    total += trapezoid(&v[ia..=ib], h);
    total += 0.5 * (v[ib] + lerp(sb)) * (sb - ib as f64) * h;
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn line(a: f64, b: f64, n: usize) -> Grid1D {
        Grid1D::new(a, b, n).unwrap()
    }

    #[test]
    fn constants_are_annihilated() {
        let f = SpatialField::from_fn(line(0.0, 1.0, 11), BoundaryKind::Line, |_| 3.5).unwrap();
        assert!(f.diff1().unwrap().linf() < 1e-12);
        assert!(f.diff2().unwrap().linf() < 1e-10);
    }

    #[test]
    fn affine_and_quadratic_exactness() {
        let g = line(-1.0, 2.0, 17);
        let x = SpatialField::from_fn(g, BoundaryKind::Line, |x| x).unwrap();
        for v in x.diff1().unwrap().values() {
            assert!((v - 1.0).abs() < 1e-12);
        }
        assert!(x.diff2().unwrap().linf() < 1e-10);
        let q = SpatialField::from_fn(g, BoundaryKind::Line, |x| x * x).unwrap();
        for v in q.diff2().unwrap().values() {
            assert!((v - 2.0).abs() < 1e-9);
        }
    }

    #[test]
    fn partial_cell_integration_is_exact_for_affine() {
        let f = SpatialField::from_fn(line(0.0, 1.0, 11), BoundaryKind::Line, |x| 2.0 * x + 1.0).unwrap();
        let v = f.integrate(0.13, 0.77).unwrap();
        let exact = (0.77f64.powi(2) + 0.77) - (0.13f64.powi(2) + 0.13);
        assert!((v - exact).abs() < 1e-14);
        let w = f.integrate(0.31, 0.33).unwrap();
        assert!((w - ((0.33f64.powi(2) + 0.33) - (0.31f64.powi(2) + 0.31))).abs() < 1e-14);
    }

    #[test]
    fn periodic_norms_of_sine() {
        let g = line(0.0, 2.0 * PI, 257);
        let f = SpatialField::from_fn(g, BoundaryKind::Periodic, f64::sin).unwrap();
        assert!((f.l2() - PI.sqrt()).abs() < 1e-3);
        assert!((f.h1().unwrap() - (2.0 * PI).sqrt()).abs() < 1e-3);
    }

    #[test]
    fn cumulative_matches_integrate() {
        let f = SpatialField::from_fn(line(0.0, PI, 201), BoundaryKind::Line, f64::sin).unwrap();
        let c = f.cumulative();
        assert!((c.values()[200] - f.integrate(0.0, PI).unwrap()).abs() < 1e-14);
    }
}
