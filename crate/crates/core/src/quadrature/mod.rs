//! Adaptive quadrature: Gauss-Kronrod on finite intervals, Gaussian-envelope
//! truncation for `[0, inf)`, sine-weighted tails with epsilon extrapolation,
//! and nested two-dimensional integration.

mod cubature;
mod kronrod;
mod oscillatory;
mod semi_infinite;

pub use cubature::integrate_2d;
pub use kronrod::{gauss_kronrod_15, integrate};
pub use oscillatory::{integrate_fourier_sine, wynn_epsilon};
pub use semi_infinite::{gaussian_cutoff, integrate_semi_infinite};

use crate::error::{Error, Result};
use crate::real::Real;

/// Tolerances and integrand hints.
///
/// `gaussian_decay_rate` is the `c` of an `exp(-c k^2)` envelope (zero when
/// the integrand has none), `envelope_center` shifts that envelope, and
/// `oscillation_period` seeds the initial partition so each panel holds at
/// most half a period.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadSpec<T> {
    pub rel_tol: T,
    pub abs_tol: T,
    pub gaussian_decay_rate: T,
    pub envelope_center: T,
    pub oscillation_period: Option<T>,
    pub max_subdivisions: usize,
}

impl<T: Real> QuadSpec<T> {
    pub fn new(rel_tol: T, abs_tol: T) -> Result<Self> {
        let spec = Self {
            rel_tol,
            abs_tol,
            ..Self::default()
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > T::zero() && self.rel_tol <= T::c(1e-4)) {
            return Err(Error::invalid(format!(
                "rel_tol {} outside (0, 1e-4]",
                self.rel_tol
            )));
        }
        if !(self.abs_tol >= T::zero()) || !self.abs_tol.is_finite() {
            return Err(Error::invalid(format!(
                "abs_tol {} must be finite and >= 0",
                self.abs_tol
            )));
        }
        if !(self.gaussian_decay_rate >= T::zero()) {
            return Err(Error::invalid("gaussian_decay_rate must be >= 0"));
        }
        if let Some(p) = self.oscillation_period {
            if !(p > T::zero() && p.is_finite()) {
                return Err(Error::invalid("oscillation_period must be positive"));
            }
        }
        if self.max_subdivisions == 0 {
            return Err(Error::invalid("max_subdivisions must be positive"));
        }
        Ok(())
    }

    pub fn with_decay(mut self, rate: T) -> Self {
        self.gaussian_decay_rate = rate;
        self
    }

    pub fn with_center(mut self, center: T) -> Self {
        self.envelope_center = center;
        self
    }

    pub fn with_period(mut self, period: Option<T>) -> Self {
        self.oscillation_period = period;
        self
    }

    pub fn with_max_subdivisions(mut self, n: usize) -> Self {
        self.max_subdivisions = n;
        self
    }

    /// Same spec with both tolerances scaled by `factor`.
    pub fn tightened(mut self, factor: T) -> Self {
        self.rel_tol = self.rel_tol * factor;
        self.abs_tol = self.abs_tol * factor;
        self
    }

    pub(crate) fn target(&self, value: T) -> T {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

impl<T: Real> Default for QuadSpec<T> {
    fn default() -> Self {
        Self {
            rel_tol: T::c(1e-10).max(T::epsilon() * T::c(64.0)),
            abs_tol: T::c(1e-15),
            gaussian_decay_rate: T::one(),
            envelope_center: T::zero(),
            oscillation_period: None,
            max_subdivisions: 4000,
        }
    }
}

/// Integral estimate with its error bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult<T> {
    pub value: T,
    pub error_estimate: T,
    pub evaluations: usize,
}

impl<T: Real> QuadResult<T> {
    pub(crate) fn accuracy_error(&self, reason: &'static str) -> Error {
        Error::Accuracy {
            value: self.value.as_f64(),
            error: self.error_estimate.as_f64(),
            evaluations: self.evaluations,
            reason,
        }
    }
}
