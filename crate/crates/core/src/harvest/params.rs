use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::real::Real;

/// Which detector a local quantity refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Detector {
    A,
    B,
}

/// Dimensionless protocol configuration, all scales in units of the switching time.
///
/// Detector A has gap `gap_mean + gap_split`, detector B `gap_mean - gap_split`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HarvestParams<T> {
    pub coupling: T,
    pub gap_mean: T,
    pub gap_split: T,
    pub mass: T,
    pub size: T,
    pub separation: T,
}

impl<T: Real> HarvestParams<T> {
    /// Equal-gap configuration with unit coupling.
    pub fn new(omega: T, mass: T, size: T, separation: T) -> Result<Self> {
        let p = Self {
            coupling: T::one(),
            gap_mean: omega,
            gap_split: T::zero(),
            mass,
            size,
            separation,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let all_finite = [
            self.coupling,
            self.gap_mean,
            self.gap_split,
            self.mass,
            self.size,
            self.separation,
        ]
        .iter()
        .all(|v| v.is_finite());
        if !all_finite {
            return Err(Error::invalid("all parameters must be finite"));
        }
        if self.coupling < T::zero() {
            return Err(Error::invalid(format!(
                "coupling must be >= 0, got {}",
                self.coupling
            )));
        }
        if self.mass < T::zero() {
            return Err(Error::invalid(format!(
                "mass must be >= 0, got {}",
                self.mass
            )));
        }
        if self.size < T::zero() {
            return Err(Error::invalid(format!(
                "size must be >= 0, got {}",
                self.size
            )));
        }
        if !(self.separation > T::zero()) {
            return Err(Error::invalid(format!(
                "separation must be > 0, got {}",
                self.separation
            )));
        }
        Ok(())
    }

    pub fn with_coupling(mut self, lambda: T) -> Self {
        self.coupling = lambda;
        self
    }

    pub fn with_gap(mut self, omega: T) -> Self {
        self.gap_mean = omega;
        self
    }

    pub fn with_gap_split(mut self, delta: T) -> Self {
        self.gap_split = delta;
        self
    }

    pub fn with_mass(mut self, mu: T) -> Self {
        self.mass = mu;
        self
    }

    pub fn with_size(mut self, sigma: T) -> Self {
        self.size = sigma;
        self
    }

    pub fn with_separation(mut self, ell: T) -> Self {
        self.separation = ell;
        self
    }

    pub fn gap(&self, which: Detector) -> T {
        match which {
            Detector::A => self.gap_mean + self.gap_split,
            Detector::B => self.gap_mean - self.gap_split,
        }
    }

    pub fn equal_gaps(&self) -> bool {
        self.gap_split == T::zero()
    }

    /// Overall `lambda^2` factor carried by every matrix element.
    pub fn lambda2(&self) -> T {
        self.coupling * self.coupling
    }
}

/// `omega_k = sqrt(k^2 + mu^2)`.
#[inline]
pub fn dispersion<T: Real>(kappa: T, mu: T) -> T {
    kappa.hypot(mu)
}
