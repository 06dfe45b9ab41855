//! Quasineutral Euler algebra for the second characteristic family:
//! characteristic speeds, Hugoniot connections, Lax admissibility and the
//! centred rarefaction fan.

use crate::error::{Error, Result};

/// Constant far-field state; `m_bar` and `phi_bar` are derived at construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EndState {
    pub n_bar: f64,
    pub u_bar: f64,
    pub m_bar: f64,
    pub phi_bar: f64,
}

impl EndState {
    pub fn new(n_bar: f64, u_bar: f64) -> Result<Self> {
        if !(n_bar > 0.0) || !n_bar.is_finite() {
            return Err(Error::InvalidArgument(format!("density must be positive, got {n_bar}")));
        }
        if !u_bar.is_finite() {
            return Err(Error::NonFinite("end-state velocity"));
        }
        Ok(Self { n_bar, u_bar, m_bar: n_bar * u_bar, phi_bar: -n_bar.ln() })
    }

    /// Same density, velocity shifted by `c`.
    pub fn boosted(&self, c: f64) -> Self {
        Self::new(self.n_bar, self.u_bar + c).expect("boost keeps a valid state")
    }
}

fn check_temperature(a: f64) -> Result<()> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::InvalidArgument(format!("temperature A must be positive, got {a}")));
    }
    Ok(())
}

/// Sound speed of the quasineutral system, `sqrt(A + 1)`.
pub fn sound_speed(a: f64) -> f64 {
    (a + 1.0).sqrt()
}

/// `(u - sqrt(A+1), u + sqrt(A+1))`.
pub fn characteristics(n: f64, u: f64, a: f64) -> Result<(f64, f64)> {
    if !(n > 0.0) {
        return Err(Error::InvalidArgument(format!("density must be positive, got {n}")));
    }
    if !(a >= 0.0) || !a.is_finite() {
        return Err(Error::InvalidArgument(format!("temperature A must be nonnegative, got {a}")));
    }
    let c = sound_speed(a);
    Ok((u - c, u + c))
}

/// A 2-shock: left and right states joined by a discontinuity of speed `speed`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShockConnection {
    pub left: EndState,
    pub right: EndState,
    pub speed: f64,
    pub strength: f64,
    /// `n (u - s)`, constant across the wave and negative for this family.
    pub mass_flux: f64,
    pub temperature: f64,
}

impl ShockConnection {
    /// Both jump residuals `(-s[n] + [nu], -s[nu] + [nu^2 + (A+1)n])`.
    pub fn rh_residuals(&self) -> (f64, f64) {
        rh_residuals(&self.left, &self.right, self.speed, self.temperature)
    }

    pub fn jump_n(&self) -> f64 {
        self.right.n_bar - self.left.n_bar
    }

    pub fn jump_m(&self) -> f64 {
        self.right.m_bar - self.left.m_bar
    }

    /// Galilean boost by `c`.
    pub fn boosted(&self, c: f64) -> Self {
        Self {
            left: self.left.boosted(c),
            right: self.right.boosted(c),
            speed: self.speed + c,
            ..*self
        }
    }

    /// Boost to the frame where `u_minus = -u_plus`.
    pub fn symmetric_frame(&self) -> Self {
        self.boosted(-0.5 * (self.left.u_bar + self.right.u_bar))
    }
}

pub fn rh_residuals(left: &EndState, right: &EndState, s: f64, a: f64) -> (f64, f64) {
    let mass = -s * (right.n_bar - left.n_bar) + (right.m_bar - left.m_bar);
    let mom_flux = |e: &EndState| e.n_bar * e.u_bar * e.u_bar + (a + 1.0) * e.n_bar;
    let mom = -s * (right.m_bar - left.m_bar) + (mom_flux(right) - mom_flux(left));
    (mass, mom)
}

/// Connects `left` to the density `n_plus < n_minus` along the 2-shock curve.
pub fn hugoniot_connect(left: &EndState, n_plus: f64, a: f64) -> Result<ShockConnection> {
    check_temperature(a)?;
    if !(n_plus > 0.0) {
        return Err(Error::InvalidArgument(format!("right density must be positive, got {n_plus}")));
    }
    if n_plus >= left.n_bar {
        return Err(Error::Inadmissible(format!(
            "a 2-shock needs n_plus < n_minus (got n_plus = {n_plus}, n_minus = {})",
            left.n_bar
        )));
    }
    let j = -((a + 1.0) * n_plus * left.n_bar).sqrt();
    let s = left.u_bar - j / left.n_bar;
    let u_plus = s + j / n_plus;
    let right = EndState::new(n_plus, u_plus)?;
    Ok(ShockConnection {
        left: *left,
        right,
        speed: s,
        strength: (left.n_bar - n_plus).abs(),
        mass_flux: j,
        temperature: a,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LaxReport {
    /// `sqrt((A+1) n_plus) < s < sqrt((A+1) n_minus)`, evaluated verbatim.
    pub density_form: bool,
    /// `lambda_2(right) < s < lambda_2(left)`.
    pub characteristic_form: bool,
}

pub fn lax_report(conn: &ShockConnection) -> LaxReport {
    let a1 = conn.temperature + 1.0;
    let s = conn.speed;
    let density_form = (a1 * conn.right.n_bar).sqrt() < s && s < (a1 * conn.left.n_bar).sqrt();
    let c = a1.sqrt();
    let characteristic_form = conn.right.u_bar + c < s && s < conn.left.u_bar + c;
    LaxReport { density_form, characteristic_form }
}

/// Endpoints of a 2-rarefaction: `u - sqrt(A+1) ln n` equal on both sides, `n_plus > n_minus`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RarefactionEndpoints {
    pub left: EndState,
    pub right: EndState,
    pub temperature: f64,
    pub strength: f64,
}

impl RarefactionEndpoints {
    pub fn new(left: EndState, right: EndState, a: f64) -> Result<Self> {
        check_temperature(a)?;
        let c = sound_speed(a);
        let residual = (right.u_bar - c * right.n_bar.ln()) - (left.u_bar - c * left.n_bar.ln());
        if residual.abs() > 1e-10 {
            return Err(Error::Inadmissible(format!(
                "end states are not on one 2-rarefaction curve (invariant mismatch {residual:e})"
            )));
        }
        if right.n_bar < left.n_bar {
            return Err(Error::Inadmissible("a 2-rarefaction needs n_plus >= n_minus".into()));
        }
        Ok(Self {
            left,
            right,
            temperature: a,
            strength: (right.n_bar - left.n_bar).abs() + (right.u_bar - left.u_bar).abs(),
        })
    }

    /// Right state on the curve through `left` with density `n_plus`.
    pub fn from_density(left: EndState, n_plus: f64, a: f64) -> Result<Self> {
        check_temperature(a)?;
        if !(n_plus > 0.0) {
            return Err(Error::InvalidArgument(format!("right density must be positive, got {n_plus}")));
        }
        let u_plus = left.u_bar + sound_speed(a) * (n_plus / left.n_bar).ln();
        Self::new(left, EndState::new(n_plus, u_plus)?, a)
    }

    /// Right state on the curve through `left` whose strength equals `delta_r`.
    pub fn from_strength(left: EndState, delta_r: f64, a: f64) -> Result<Self> {
        check_temperature(a)?;
        if !(delta_r > 0.0) {
            return Err(Error::InvalidArgument(format!("rarefaction strength must be positive, got {delta_r}")));
        }
        let c = sound_speed(a);
        let g = |dn: f64| dn + c * ((left.n_bar + dn) / left.n_bar).ln() - delta_r;
        let (mut lo, mut hi) = (0.0, delta_r);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if g(mid) > 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Self::from_density(left, left.n_bar + 0.5 * (lo + hi), a)
    }

    /// `w = u + sqrt(A+1)` on each side.
    pub fn w_bounds(&self) -> (f64, f64) {
        let c = sound_speed(self.temperature);
        (self.left.u_bar + c, self.right.u_bar + c)
    }

    /// `(n, u, phi)` from the Riemann invariant value `w` along the curve.
    pub fn state_from_w(&self, w: f64) -> (f64, f64, f64) {
        let c = sound_speed(self.temperature);
        let u = w - c;
        let n = self.left.n_bar * ((u - self.left.u_bar) / c).exp();
        (n, u, -n.ln())
    }
}

/// Centred fan evaluated at `xi = x / t`.
pub fn rarefaction_exact(ends: &RarefactionEndpoints, xi: f64) -> (f64, f64, f64) {
    let (wl, wr) = ends.w_bounds();
    if xi <= wl {
        (ends.left.n_bar, ends.left.u_bar, ends.left.phi_bar)
    } else if xi >= wr {
        (ends.right.n_bar, ends.right.u_bar, ends.right.phi_bar)
    } else {
        ends.state_from_w(xi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn characteristic_examples() {
        let (l1, l2) = characteristics(1.0, 0.0, 1.0).unwrap();
        assert!((l1 + 2f64.sqrt()).abs() < 1e-15 && (l2 - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(characteristics(5.0, 3.0, 0.0).unwrap(), (2.0, 4.0));
        assert!(characteristics(0.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn textbook_connection() {
        let left = EndState::new(2.0, 0.0).unwrap();
        let c = hugoniot_connect(&left, 1.0, 1.0).unwrap();
        assert!((c.mass_flux + 2.0).abs() < 1e-14);
        assert!((c.speed - 1.0).abs() < 1e-14);
        assert!((c.right.u_bar + 1.0).abs() < 1e-14);
        let (r1, r2) = c.rh_residuals();
        assert!(r1.abs() < 1e-12 && r2.abs() < 1e-12);
        let lax = lax_report(&c);
        assert!(lax.characteristic_form);
        assert!(!lax.density_form);
    }

    #[test]
    fn expansion_rejected() {
        let left = EndState::new(1.0, 0.0).unwrap();
        assert!(matches!(hugoniot_connect(&left, 1.2, 1.0), Err(Error::Inadmissible(_))));
    }

    #[test]
    fn fan_is_self_similar() {
        let left = EndState::new(1.0, 0.0).unwrap();
        let ends = RarefactionEndpoints::from_strength(left, 0.2, 1.0).unwrap();
        assert!((ends.strength - 0.2).abs() < 1e-12);
        let (wl, wr) = ends.w_bounds();
        for k in 1..20 {
            let xi = wl + (wr - wl) * k as f64 / 20.0;
            let (n, u, _) = rarefaction_exact(&ends, xi);
            let (_, l2) = characteristics(n, u, 1.0).unwrap();
            assert!((l2 - xi).abs() < 1e-12);
        }
    }
}
