//! Parameter sweeps and one-dimensional optimization.
//!
//! Sweeps evaluate any harvesting quantity over a rectangular grid in
//! parallel, with rows returned in a fixed order. The optimizers maximize the
//! negativity over the gap or the mass (bracketing scan followed by Brent),
//! locate the entanglement threshold in the gap, and trace the mass
//! derivatives of `L` and `|M|` along the optimal-gap curve.

mod brent;
mod derivative;
mod grid;
mod search;

pub use brent::{brent_root, maximize, OptResult, Root};
pub use derivative::{derivative_crossing, derivative_curves, DerivativeRow, MASS_STEP};
pub use grid::{
    evaluate, run_sweep, Axis, AxisName, Quantity, RowStatus, Spacing, SweepGrid, SweepRow,
};
pub use search::{
    margin, maximize_over_mu, maximize_over_omega, threshold_omega, GapChoice, MassOptimum,
    OMEGA_MIN, SCAN_POINTS,
};
