use thiserror::Error;

/// Errors raised by the numerical building blocks and the physics modules.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("grid needs at least {min} points, got {got}")]
    GridTooSmall { min: usize, got: usize },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("{what} = {value} lies outside [{lo}, {hi}]")]
    OutOfRange {
        what: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("singular or near-singular pivot at row {row} (|pivot| = {pivot:e})")]
    SingularPivot { row: usize, pivot: f64 },

    #[error("non-finite value encountered in {0}")]
    NonFinite(&'static str),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{solver} did not converge after {iterations} iterations (residual {residual:e})")]
    NoConvergence {
        solver: &'static str,
        iterations: usize,
        residual: f64,
    },

    #[error("inadmissible wave configuration: {0}")]
    Inadmissible(String),

    #[error("density lost positivity at x = {x} (n = {n:e}, t = {t})")]
    PositivityLoss { x: f64, n: f64, t: f64 },

    #[error("time step {dt:e} violates the stability bound {limit:e}")]
    CflViolation { dt: f64, limit: f64 },

    #[error("blow-up detected at t = {t}: norm {norm:e} exceeds bound {bound:e}")]
    BlowUp { t: f64, norm: f64, bound: f64 },

    #[error("fit rejected: {0}")]
    FitRejected(String),

    #[error("smallness condition violated: {0}")]
    Smallness(String),

    #[error("time {t} outside history coverage [{start}, {end}]")]
    OutsideHistory { t: f64, start: f64, end: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
