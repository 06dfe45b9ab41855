//! Numerical toolkit for the one-dimensional isentropic Navier-Stokes-Poisson
//! system
//!
//! ```text
//! n_t + m_x = 0,
//! m_t + (m^2/n)_x + A n_x - n phi_x = u_xx,   u = m/n,
//! phi_xx = n - exp(-phi),
//! ```
//!
//! covering viscous shock profiles, periodic solutions, shift dynamics,
//! quadratic ansatzes around shocks and rarefactions, and a truncated-line
//! Cauchy solver.

pub mod ansatz;
pub mod cauchy;
pub mod error;
pub mod export;
pub mod numerics;
pub mod periodic;
pub mod profile;
pub mod riemann;
pub mod scenario;
pub mod shifts;

pub use error::{Error, Result};
