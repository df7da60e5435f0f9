//! Entanglement harvesting by two smeared detectors coupled to a massive
//! scalar field in 3+1 dimensions.
//!
//! Everything is generic over the scalar type through [`Real`]; the aliases
//! below fix it to `f64`.

mod error;
mod real;

pub mod analytic;
pub mod harvest;
pub mod quadrature;
pub mod specfun;
pub mod sweep_opt;

pub use error::{Error, Result};
pub use real::Real;

pub type Params = harvest::HarvestParams<f64>;
pub type Spec = quadrature::QuadSpec<f64>;
pub type State = harvest::TwoDetectorState<f64>;
pub type Grid = sweep_opt::SweepGrid<f64>;
pub type Row = sweep_opt::SweepRow<f64>;
