//! Two Gaussian detectors coupled to a massive scalar field.
//!
//! Quantities are dimensionless: energies in units of the inverse switching
//! width, lengths in units of the width. The matrix elements are reduced to
//! one-dimensional momentum integrals and evaluated by adaptive quadrature.

mod elements;
pub mod oracle;
mod overlap;
mod params;
mod state;
mod wightman;

pub use elements::{compute_l, compute_l_cross, compute_m, im_m, n_plus, re_m, split_m, Estimate};
pub use overlap::{
    conservative_overlap, conservative_shift, shifted_overlap, smearing_overlap,
    smearing_overlap_log10,
};
pub use params::{dispersion, Detector, HarvestParams};
pub use state::{
    breakdown, density_matrix, negativity, negativity_eigen_oracle, negativity_margin,
    signalling_fraction, NegativityBreakdown, StateEstimate, TwoDetectorState, PERTURBATIVE_LIMIT,
};
pub use wightman::wightman;
