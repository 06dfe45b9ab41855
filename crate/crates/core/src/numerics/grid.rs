use crate::error::{Error, Result};

/// Uniform 1-D grid `x_i = x_min + i * spacing`, `i = 0..n_points`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D {
    x_min: f64,
    x_max: f64,
    n_points: usize,
    spacing: f64,
}

impl Grid1D {
    pub fn new(x_min: f64, x_max: f64, n_points: usize) -> Result<Self> {
        if n_points < 3 {
            return Err(Error::GridTooSmall { min: 3, got: n_points });
        }
        if !(x_min.is_finite() && x_max.is_finite()) || x_max <= x_min {
            return Err(Error::InvalidGrid(format!(
                "need finite x_min < x_max, got [{x_min}, {x_max}]"
            )));
        }
        Ok(Self {
            x_min,
            x_max,
            n_points,
            spacing: (x_max - x_min) / (n_points - 1) as f64,
        })
    }

    /// Grid with a prescribed spacing and `n_points` nodes starting at `x_min`.
    pub fn with_spacing(x_min: f64, spacing: f64, n_points: usize) -> Result<Self> {
        if !(spacing > 0.0) {
            return Err(Error::InvalidGrid(format!("spacing must be positive, got {spacing}")));
        }
        let mut g = Self::new(x_min, x_min + spacing * (n_points.max(3) - 1) as f64, n_points)?;
        g.spacing = spacing;
        Ok(g)
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }
    pub fn x_max(&self) -> f64 {
        self.x_max
    }
    pub fn n_points(&self) -> usize {
        self.n_points
    }
    pub fn spacing(&self) -> f64 {
        self.spacing
    }
    pub fn len(&self) -> f64 {
        self.x_max - self.x_min
    }

    #[inline]
    pub fn point(&self, i: usize) -> f64 {
        self.x_min + i as f64 * self.spacing
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n_points).map(|i| self.point(i)).collect()
    }

    pub fn contains(&self, x: f64) -> bool {
        let eps = 1e-12 * self.spacing;
        x >= self.x_min - eps && x <= self.x_max + eps
    }

    /// Index of the node nearest to `x`, clamped to the grid.
    pub fn nearest(&self, x: f64) -> usize {
        let r = ((x - self.x_min) / self.spacing).round();
        r.clamp(0.0, (self.n_points - 1) as f64) as usize
    }

    /// Halved spacing over the same span.
    pub fn refined(&self) -> Self {
        Self::new(self.x_min, self.x_max, 2 * self.n_points - 1).expect("refinement of a valid grid")
    }
}
