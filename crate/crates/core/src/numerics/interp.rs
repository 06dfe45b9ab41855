/// Cubic Hermite interpolation on a uniform grid from values and first derivatives.
///
/// Returns `(value, derivative)`. Arguments outside the grid are clamped to the
/// end nodes (constant extrapolation of the value, zero slope).
pub fn hermite_uniform(x0: f64, h: f64, values: &[f64], slopes: &[f64], x: f64) -> (f64, f64) {
    let n = values.len();
    let s = (x - x0) / h;
    if s <= 0.0 {
        return (values[0], if s == 0.0 { slopes[0] } else { 0.0 });
    }
    if s >= (n - 1) as f64 {
        return (values[n - 1], if s == (n - 1) as f64 { slopes[n - 1] } else { 0.0 });
    }
    let i = (s.floor() as usize).min(n - 2);
    let t = s - i as f64;
    hermite_cell(values[i], values[i + 1], slopes[i] * h, slopes[i + 1] * h, t, h)
}

/// Hermite cubic on one cell, with endpoint slopes already scaled by the cell width.
#[inline]
pub fn hermite_cell(y0: f64, y1: f64, m0: f64, m1: f64, t: f64, h: f64) -> (f64, f64) {
    let t2 = t * t;
    let t3 = t2 * t;
    let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
    let h10 = t3 - 2.0 * t2 + t;
    let h01 = -2.0 * t3 + 3.0 * t2;
    let h11 = t3 - t2;
    let v = h00 * y0 + h10 * m0 + h01 * y1 + h11 * m1;
    let d00 = 6.0 * t2 - 6.0 * t;
    let d10 = 3.0 * t2 - 4.0 * t + 1.0;
    let d01 = -6.0 * t2 + 6.0 * t;
    let d11 = 3.0 * t2 - 2.0 * t;
    let d = (d00 * y0 + d10 * m0 + d01 * y1 + d11 * m1) / h;
    (v, d)
}

/// Linear interpolation on a uniform grid (clamped).
pub fn linear_uniform(x0: f64, h: f64, values: &[f64], x: f64) -> f64 {
    let n = values.len();
    let s = (x - x0) / h;
    if s <= 0.0 {
        return values[0];
    }
    if s >= (n - 1) as f64 {
        return values[n - 1];
    }
    let i = s.floor() as usize;
    let t = s - i as f64;
    values[i] * (1.0 - t) + values[i + 1] * t
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_on_cubics() {
        let h = 0.3;
        let xs: Vec<f64> = (0..10).map(|i| i as f64 * h).collect();
        let f = |x: f64| 1.0 - 2.0 * x + 0.5 * x * x - 0.25 * x * x * x;
        let df = |x: f64| -2.0 + x - 0.75 * x * x;
        let v: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
        let d: Vec<f64> = xs.iter().map(|&x| df(x)).collect();
        for k in 0..50 {
            let x = 0.05 + k as f64 * 0.05;
            let (y, dy) = hermite_uniform(0.0, h, &v, &d, x);
            assert!((y - f(x)).abs() < 1e-12);
            assert!((dy - df(x)).abs() < 1e-11);
        }
    }
}
