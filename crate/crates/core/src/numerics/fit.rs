use crate::error::{Error, Result};

/// Ordinary least-squares line `y = intercept + slope * x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub n: usize,
}

pub fn linear_fit(x: &[f64], y: &[f64]) -> Result<LinearFit> {
    if x.len() != y.len() {
        return Err(Error::ShapeMismatch(format!("fit: {} abscissae vs {} ordinates", x.len(), y.len())));
    }
    let n = x.len();
    if n < 3 {
        return Err(Error::FitRejected(format!("need at least 3 samples, got {n}")));
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(Error::FitRejected("non-finite sample".into()));
    }
    let nf = n as f64;
    let mx = x.iter().sum::<f64>() / nf;
    let my = y.iter().sum::<f64>() / nf;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let dx = a - mx;
        let dy = b - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if sxx == 0.0 {
        return Err(Error::FitRejected("abscissae are all equal".into()));
    }
    let slope = sxy / sxx;
    let r_squared = if syy == 0.0 { 1.0 } else { (sxy * sxy) / (sxx * syy) };
    Ok(LinearFit { slope, intercept: my - slope * mx, r_squared, n })
}

/// Exponential decay `y ~ C exp(-rate * t)` fitted in log space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayFit {
    pub rate: f64,
    pub prefactor: f64,
    pub r_squared: f64,
    pub decades: f64,
}

pub fn fit_exponential_decay(t: &[f64], y: &[f64]) -> Result<DecayFit> {
    if y.iter().any(|v| !(*v > 0.0)) {
        return Err(Error::FitRejected("decay fit needs strictly positive samples".into()));
    }
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let f = linear_fit(t, &ly)?;
    let (lo, hi) = ly.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(*v), b.max(*v)));
    Ok(DecayFit {
        rate: -f.slope,
        prefactor: f.intercept.exp(),
        r_squared: f.r_squared,
        decades: (hi - lo) / std::f64::consts::LN_10,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_exact_line() {
        let x = [0.0, 1.0, 2.0, 3.0];
        let y = [1.0, 3.0, 5.0, 7.0];
        let f = linear_fit(&x, &y).unwrap();
        assert!((f.slope - 2.0).abs() < 1e-14);
        assert!((f.intercept - 1.0).abs() < 1e-14);
        assert!((f.r_squared - 1.0).abs() < 1e-14);
    }

    #[test]
    fn recovers_decay_rate() {
        let t: Vec<f64> = (0..50).map(|i| i as f64 * 0.2).collect();
        let y: Vec<f64> = t.iter().map(|s| 3.0 * (-0.7 * s).exp()).collect();
        let f = fit_exponential_decay(&t, &y).unwrap();
        assert!((f.rate - 0.7).abs() < 1e-12);
        assert!((f.prefactor - 3.0).abs() < 1e-12);
    }

    #[test]
    fn zero_samples_rejected() {
        assert!(fit_exponential_decay(&[0.0, 1.0, 2.0], &[0.0, 0.0, 0.0]).is_err());
    }
}
