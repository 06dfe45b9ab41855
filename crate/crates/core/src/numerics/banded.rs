//! Banded LU with partial pivoting, used by the collocation Newton solver.

use crate::error::{Error, Result};

/// Square band matrix with `kl` sub- and `ku` super-diagonals.
///
/// Each row keeps `2*kl + ku + 1` slots so row interchanges have room for fill-in.
#[derive(Debug, Clone)]
pub struct BandMatrix {
    n: usize,
    kl: usize,
    ku: usize,
    width: usize,
    data: Vec<f64>,
}

impl BandMatrix {
    pub fn zeros(n: usize, kl: usize, ku: usize) -> Self {
        let width = 2 * kl + ku + 1;
        Self { n, kl, ku, width, data: vec![0.0; n * width] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    fn slot(&self, i: usize, j: usize) -> Option<usize> {
        if j + self.kl < i || j > i + self.ku + self.kl || j >= self.n {
            None
        } else {
            Some(i * self.width + (j + self.kl - i))
        }
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.slot(i, j).map_or(0.0, |k| self.data[k])
    }

    /// Sets an entry inside the declared band.
    pub fn set(&mut self, i: usize, j: usize, v: f64) -> Result<()> {
        if j + self.kl < i || j > i + self.ku || j >= self.n {
            return Err(Error::InvalidArgument(format!(
                "entry ({i}, {j}) outside band kl={}, ku={}",
                self.kl, self.ku
            )));
        }
        let k = self.slot(i, j).expect("inside band");
        self.data[k] = v;
        Ok(())
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|i| {
                let lo = i.saturating_sub(self.kl);
                let hi = (i + self.ku + self.kl).min(self.n - 1);
                (lo..=hi).map(|j| self.get(i, j) * x[j]).sum()
            })
            .collect()
    }

    /// Factor and solve in place; the matrix is consumed.
    pub fn solve(mut self, rhs: &[f64]) -> Result<Vec<f64>> {
        let n = self.n;
        if rhs.len() != n {
            return Err(Error::ShapeMismatch(format!("rhs length {} vs matrix order {n}", rhs.len())));
        }
        let scale = self.data.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        let tiny = (scale * 1e-15).max(1e-300);
        let mut b = rhs.to_vec();
        let span = self.kl + self.ku;
        for k in 0..n {
            let last_row = (k + self.kl).min(n - 1);
            let mut p = k;
            let mut best = self.get(k, k).abs();
            for i in k + 1..=last_row {
                let v = self.get(i, k).abs();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if best <= tiny {
                return Err(Error::SingularPivot { row: k, pivot: best });
            }
            let last_col = (k + span).min(n - 1);
            if p != k {
                for j in k..=last_col {
                    let a = self.slot(k, j).expect("band");
                    let c = self.slot(p, j).expect("band");
                    self.data.swap(a, c);
                }
                b.swap(k, p);
            }
            let piv = self.get(k, k);
            for i in k + 1..=last_row {
                let li = self.slot(i, k).expect("band");
                let f = self.data[li] / piv;
                if f == 0.0 {
                    continue;
                }
                self.data[li] = 0.0;
                for j in k + 1..=last_col {
                    let kj = self.slot(k, j).expect("band");
                    let ij = self.slot(i, j).expect("band");
                    self.data[ij] -= f * self.data[kj];
                }
                b[i] -= f * b[k];
            }
        }
        let mut x = vec![0.0; n];
        for i in (0..n).rev() {
            let hi = (i + span).min(n - 1);
            let mut acc = b[i];
            for j in i + 1..=hi {
                acc -= self.get(i, j) * x[j];
            }
            x[i] = acc / self.get(i, i);
        }
        if x.iter().all(|v| v.is_finite()) {
            Ok(x)
        } else {
            Err(Error::NonFinite("banded solve"))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::{DMatrix, DVector};

    #[test]
    fn matches_dense_solve() {
        let n = 40;
        let (kl, ku) = (2, 4);
        let mut m = BandMatrix::zeros(n, kl, ku);
        let mut dense = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in i.saturating_sub(kl)..=(i + ku).min(n - 1) {
                // deliberately not diagonally dominant
                let v = ((i * 7 + j * 13) % 11) as f64 - 5.0 + if i == j { 0.5 } else { 0.0 };
                m.set(i, j, v).unwrap();
                dense[(i, j)] = v;
            }
        }
        let rhs: Vec<f64> = (0..n).map(|i| (i as f64).sin()).collect();
        let x = m.solve(&rhs).unwrap();
        let xd = dense.lu().solve(&DVector::from_vec(rhs)).unwrap();
        for i in 0..n {
            assert!((x[i] - xd[i]).abs() < 1e-9 * (1.0 + xd[i].abs()), "{i}: {} vs {}", x[i], xd[i]);
        }
    }
}
