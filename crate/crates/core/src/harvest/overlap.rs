//! Overlap of the two detectors' spacetime smearings.
//!
//! With `chi(t) = e^{-t^2/2}/sqrt(2 pi)` and a normalized Gaussian profile of
//! width `sigma`, shifting detector A by `s` along the null direction towards
//! B gives `e^{-s^2/4} / (2 sqrt(pi)) (4 pi sigma^2)^{-3/2} e^{-(l-s)^2/(4 sigma^2)}`.

use crate::real::Real;

fn prefactor<T: Real>(sigma: T) -> T {
    let four_pi_s2 = T::c(4.0) * T::PI() * sigma * sigma;
    (T::c(2.0) * T::PI().sqrt()).recip() * four_pi_s2.powf(T::c(-1.5))
}

/// Overlap of the null-shifted smearings for shift `s`.
pub fn shifted_overlap<T: Real>(ell: T, sigma: T, s: T) -> T {
    if sigma == T::zero() {
        return T::zero();
    }
    let d = ell - s;
    let exponent = -(s * s) / T::c(4.0) - d * d / (T::c(4.0) * sigma * sigma);
    prefactor(sigma) * exponent.exp()
}

/// `int Lambda_A Lambda_B dV` for the unshifted smearings.
pub fn smearing_overlap<T: Real>(ell: T, sigma: T) -> T {
    shifted_overlap(ell, sigma, T::zero())
}

/// `log10` of [`smearing_overlap`], finite even when the overlap underflows.
pub fn smearing_overlap_log10<T: Real>(ell: T, sigma: T) -> T {
    let exponent = -(ell * ell) / (T::c(4.0) * sigma * sigma);
    prefactor(sigma).log10() + exponent / T::LN_10()
}

/// Null shift maximizing the overlap, `s = l / (1 + sigma^2)`.
pub fn conservative_shift<T: Real>(ell: T, sigma: T) -> T {
    ell / (T::one() + sigma * sigma)
}

/// Largest overlap over null shifts; exponent `-l^2 / (4 (1 + sigma^2))`.
pub fn conservative_overlap<T: Real>(ell: T, sigma: T) -> T {
    shifted_overlap(ell, sigma, conservative_shift(ell, sigma))
}
