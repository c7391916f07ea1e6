//! Weighted-lattice (tropical) numerics.
//!
//! * [`clodum`]: scalar max-⊛ arithmetic over max-plus, max-times, max-min
//!   and the log-sum-exp smoothed max-softmin.
//! * [`wlattice`]: vectors, matrices and 1D signals with their dilations and
//!   adjoint erosions.
//! * [`solver`]: greatest subsolutions and minimum max-error solutions of
//!   `A ⊛ x = b`.
//! * [`tropgeom`]: tropical polynomials, varieties, Newton polytopes and
//!   halfspaces.
//! * [`regression`]: max-affine curve and surface fitting.
//!
//! Everything is generic over [`Real`] (`f32` or `f64`); the aliases below
//! fix the scalar to `f64`, with `*32` variants for `f32`.

pub mod clodum;
pub mod error;
mod linalg;
pub mod real;
pub mod regression;
pub mod solver;
pub mod tropgeom;
pub mod wlattice;

pub use clodum::Clodum;
pub use error::{Error, Result};
pub use real::Real;
pub use regression::{FitProblem, FitReport, Method, Samples, SlopeSource, SlopeSpec};
pub use solver::{SolveResult, SolveWarning};
pub use tropgeom::{Orientation, Polytope, Term, TropicalHalfspace, TropicalPolynomial};
pub use wlattice::{Signal1D, TropicalMatrix, TropicalVector};

pub type Clodum64 = Clodum<f64>;
pub type Vector = TropicalVector<f64>;
pub type Matrix = TropicalMatrix<f64>;
pub type Signal = Signal1D<f64>;
pub type Polynomial = TropicalPolynomial<f64>;
pub type Halfspace = TropicalHalfspace<f64>;
pub type Polytope64 = Polytope<f64>;
pub type Dataset = Samples<f64>;

pub type Clodum32 = Clodum<f32>;
pub type Vector32 = TropicalVector<f32>;
pub type Matrix32 = TropicalMatrix<f32>;
pub type Signal32 = Signal1D<f32>;
pub type Polynomial32 = TropicalPolynomial<f32>;
pub type Dataset32 = Samples<f32>;
