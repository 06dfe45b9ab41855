//! Tridiagonal solves: Gaussian elimination with partial pivoting for the
//! open case, Sherman-Morrison for the cyclic one.

use crate::error::{Error, Result};

/// `A x = rhs` with `A[i][i-1] = sub[i]`, `A[i][i] = diag[i]`, `A[i][i+1] = sup[i]`.
///
/// When `cyclic` is set, `sub[0]` is the corner entry `A[0][n-1]` and
/// `sup[n-1]` is `A[n-1][0]`; otherwise those two entries are ignored.
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalSystem {
    pub sub: Vec<f64>,
    pub diag: Vec<f64>,
    pub sup: Vec<f64>,
    pub rhs: Vec<f64>,
    pub cyclic: bool,
}

const PIVOT_TOL: f64 = 1e-300;

impl TridiagonalSystem {
    pub fn new(sub: Vec<f64>, diag: Vec<f64>, sup: Vec<f64>, rhs: Vec<f64>, cyclic: bool) -> Result<Self> {
        let n = diag.len();
        if sub.len() != n || sup.len() != n || rhs.len() != n {
            return Err(Error::ShapeMismatch(format!(
                "tridiagonal bands have lengths sub={}, diag={n}, sup={}, rhs={}",
                sub.len(),
                sup.len(),
                rhs.len()
            )));
        }
        if n == 0 {
            return Err(Error::InvalidArgument("empty tridiagonal system".into()));
        }
        if cyclic && n < 3 {
            return Err(Error::GridTooSmall { min: 3, got: n });
        }
        Ok(Self { sub, diag, sup, rhs, cyclic })
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// `A x` for the stored matrix.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let n = self.len();
        let mut y = vec![0.0; n];
        for i in 0..n {
            let mut v = self.diag[i] * x[i];
            if i > 0 {
                v += self.sub[i] * x[i - 1];
            } else if self.cyclic {
                v += self.sub[0] * x[n - 1];
            }
            if i + 1 < n {
                v += self.sup[i] * x[i + 1];
            } else if self.cyclic {
                v += self.sup[n - 1] * x[0];
            }
            y[i] = v;
        }
        y
    }

    pub fn solve(&self) -> Result<Vec<f64>> {
        solve_tridiagonal(self)
    }
}

/// Solves the system; singular pivots are reported instead of producing NaN.
pub fn solve_tridiagonal(sys: &TridiagonalSystem) -> Result<Vec<f64>> {
    let n = sys.len();
    if !sys.cyclic {
        return solve_open(&sys.sub, &sys.diag, &sys.sup, &sys.rhs);
    }
    let alpha = sys.sup[n - 1];
    let beta = sys.sub[0];
    if alpha == 0.0 && beta == 0.0 {
        return solve_open(&sys.sub, &sys.diag, &sys.sup, &sys.rhs);
    }
    // A = B + u v^T with u = (gamma, 0.., alpha), v = (1, 0.., beta/gamma).
    let gamma = if sys.diag[0] != 0.0 { -sys.diag[0] } else { -1.0 };
    let mut diag = sys.diag.clone();
    diag[0] -= gamma;
    diag[n - 1] -= alpha * beta / gamma;
    let x = solve_open(&sys.sub, &diag, &sys.sup, &sys.rhs)?;
    let mut u = vec![0.0; n];
    u[0] = gamma;
    u[n - 1] = alpha;
    let z = solve_open(&sys.sub, &diag, &sys.sup, &u)?;
    let vx = x[0] + beta / gamma * x[n - 1];
    let vz = z[0] + beta / gamma * z[n - 1];
    let denom = 1.0 + vz;
    if denom.abs() < 1e-14 {
        return Err(Error::SingularPivot { row: 0, pivot: denom.abs() });
    }
    let f = vx / denom;
    let out: Vec<f64> = x.iter().zip(&z).map(|(a, b)| a - f * b).collect();
    if out.iter().all(|v| v.is_finite()) {
        Ok(out)
    } else {
        Err(Error::NonFinite("cyclic tridiagonal solve"))
    }
}

/// Non-cyclic solve with row interchanges (LAPACK `gtsv` style).
fn solve_open(sub: &[f64], diag: &[f64], sup: &[f64], rhs: &[f64]) -> Result<Vec<f64>> {
    let n = diag.len();
    let scale = diag
        .iter()
        .chain(&sub[1.min(n)..])
        .chain(&sup[..n.saturating_sub(1)])
        .fold(0.0_f64, |m, v| m.max(v.abs()));
    let tiny = (scale * 1e-15).max(PIVOT_TOL);
    // dl: sub below diagonal, d: diagonal, du: first super, du2: second super (fill).
    let mut dl: Vec<f64> = (1..n).map(|i| sub[i]).collect();
    let mut d = diag.to_vec();
    let mut du: Vec<f64> = (0..n.saturating_sub(1)).map(|i| sup[i]).collect();
    let mut du2 = vec![0.0; n.saturating_sub(2)];
    let mut b = rhs.to_vec();
    for i in 0..n.saturating_sub(1) {
        if d[i].abs() >= dl[i].abs() {
            if d[i].abs() <= tiny {
                return Err(Error::SingularPivot { row: i, pivot: d[i].abs() });
            }
            let f = dl[i] / d[i];
            d[i + 1] -= f * du[i];
            b[i + 1] -= f * b[i];
            dl[i] = f;
        } else {
            let f = d[i] / dl[i];
            d[i] = dl[i];
            let tmp = d[i + 1];
            d[i + 1] = du[i] - f * tmp;
            if i + 2 < n {
                du2[i] = du[i + 1];
                du[i + 1] = -f * du2[i];
            }
            du[i] = tmp;
            b.swap(i, i + 1);
            b[i + 1] -= f * b[i];
            dl[i] = f;
        }
    }
    if d[n - 1].abs() <= tiny {
        return Err(Error::SingularPivot { row: n - 1, pivot: d[n - 1].abs() });
    }
    let mut x = vec![0.0; n];
    x[n - 1] = b[n - 1] / d[n - 1];
    if n > 1 {
        x[n - 2] = (b[n - 2] - du[n - 2] * x[n - 1]) / d[n - 2];
    }
    for i in (0..n.saturating_sub(2)).rev() {
        x[i] = (b[i] - du[i] * x[i + 1] - du2[i] * x[i + 2]) / d[i];
    }
    if x.iter().all(|v| v.is_finite()) {
        Ok(x)
    } else {
        Err(Error::NonFinite("tridiagonal solve"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_returns_rhs() {
        let n = 5;
        let sys = TridiagonalSystem::new(vec![0.0; n], vec![1.0; n], vec![0.0; n], vec![1.0, 2.0, 3.0, 4.0, 5.0], false)
            .unwrap();
        assert_eq!(sys.solve().unwrap(), vec![1.0, 2.0, 3.0, 4.0, 5.0]);
    }

    #[test]
    fn laplacian_four_by_four() {
        let sys = TridiagonalSystem::new(vec![-1.0; 4], vec![2.0; 4], vec![-1.0; 4], vec![1.0, 0.0, 0.0, 1.0], false)
            .unwrap();
        let x = sys.solve().unwrap();
        for v in x {
            assert!((v - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn zero_leading_pivot_is_handled_by_interchange() {
        // [[0,1,0],[1,0,1],[0,1,1]] x = [1,2,2] -> x = (1,1,1)
        let sys = TridiagonalSystem::new(
            vec![0.0, 1.0, 1.0],
            vec![0.0, 0.0, 1.0],
            vec![1.0, 1.0, 0.0],
            vec![1.0, 2.0, 2.0],
            false,
        )
        .unwrap();
        let x = sys.solve().unwrap();
        for v in x {
            assert!((v - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn singular_matrix_reported() {
        let sys = TridiagonalSystem::new(vec![1.0; 3], vec![1.0; 3], vec![1.0; 3], vec![1.0; 3], false).unwrap();
        // rows 0 and 1 of [[1,1,0],[1,1,1],[0,1,1]] are independent; make it singular:
        let sing = TridiagonalSystem { diag: vec![1.0, 1.0, 0.0], sub: vec![0.0, 1.0, 0.0], sup: vec![1.0, 0.0, 0.0], ..sys };
        assert!(matches!(sing.solve(), Err(Error::SingularPivot { .. })));
    }

    #[test]
    fn cyclic_periodic_laplacian_shifted() {
        let n = 16;
        let sys = TridiagonalSystem::new(vec![1.0; n], vec![-3.0; n], vec![1.0; n], (0..n).map(|i| i as f64).collect(), true)
            .unwrap();
        let x = sys.solve().unwrap();
        let r = sys.apply(&x);
        for (a, b) in r.iter().zip(&sys.rhs) {
            assert!((a - b).abs() < 1e-12);
        }
    }
}
