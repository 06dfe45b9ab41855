pub mod banded;
pub mod field;
pub mod fit;
pub mod grid;
pub mod interp;
pub mod tridiag;

pub use field::{combined_hk, BoundaryKind, Norms, SpatialField};
pub use fit::{fit_exponential_decay, linear_fit, DecayFit, LinearFit};
pub use grid::Grid1D;
pub use tridiag::{solve_tridiagonal, TridiagonalSystem};
pub use interp::{hermite_cell, hermite_uniform, linear_uniform};
