//! Closed-form results: the massless pointlike estimator, its expansion in
//! mass and size, the optimal-gap law and the fits of its coefficients.

mod fit;
mod gap;
mod massless;
mod taylor;

pub use fit::{fit_constants, linspace, FitConstants, FitReport};
pub use gap::{epsilon_solve, ExpansionConvention, GapOptimum};
pub use massless::{
    dn_plus_domega_massless, l_massless, n_plus_massless, re_m_massless, stationarity_residual,
    stationarity_solve,
};
pub use taylor::{
    d2n_dmu2_at0, sigma2_corrections, taylor_coefficients, taylor_n_plus, TaylorCoefficients,
};
