//! Closed forms for a massless field and pointlike detectors.

use crate::error::{Error, Result};
use crate::real::Real;
use crate::specfun::{dawson_raw, erfc_raw, erfcx_nonneg, erfi_scaled};
use crate::sweep_opt::brent_root;

fn two_pi2_inv<T: Real>(k: f64) -> T {
    T::one() / (T::c(k) * T::PI() * T::PI())
}

/// `sqrt(pi) omega e^{omega^2} erfc(omega)` for `omega >= 0`.
fn sqrt_pi_w_erfcx<T: Real>(omega: T) -> T {
    T::PI().sqrt() * omega * erfcx_nonneg(omega)
}

/// Local noise `L` at zero mass and size, per unit `lambda^2`.
pub fn l_massless<T: Real>(omega: T) -> T {
    let e = (-(omega * omega)).exp();
    let v = if omega >= T::zero() {
        e * (T::one() - sqrt_pi_w_erfcx(omega))
    } else {
        e - T::PI().sqrt() * omega * erfc_raw(omega)
    };
    v * two_pi2_inv(8.0)
}

/// `Re M` at zero mass and size; negative.
pub fn re_m_massless<T: Real>(omega: T, ell: T) -> T {
    -(-(omega * omega)).exp() * dawson_raw(T::c(0.5) * ell) / ell * two_pi2_inv(4.0)
}

/// Harvesting estimator `|Re M| - L` at zero mass and size.
pub fn n_plus_massless<T: Real>(omega: T, ell: T) -> T {
    re_m_massless(omega, ell).abs() - l_massless(omega)
}

/// `d/d omega` of [`n_plus_massless`].
pub fn dn_plus_domega_massless<T: Real>(omega: T, ell: T) -> T {
    let c = T::c(2.0) * dawson_raw(T::c(0.5) * ell) / ell;
    let e = (-(omega * omega)).exp();
    (T::PI().sqrt() * erfc_raw(omega) - T::c(2.0) * omega * c * e) * two_pi2_inv(8.0)
}

/// `e^{omega^2} erfc(omega) / omega - e^{-l^2/4} erfi(l/2) / (l/2)`; zero at the optimal gap.
pub fn stationarity_residual<T: Real>(omega: T, ell: T) -> T {
    let half = T::c(0.5) * ell;
    erfcx_nonneg(omega) / omega - erfi_scaled(half) / half
}

/// Gap maximizing the massless pointlike estimator at separation `ell`.
pub fn stationarity_solve<T: Real>(ell: T) -> Result<T> {
    if !(ell > T::zero()) || !ell.is_finite() {
        return Err(Error::invalid(format!(
            "separation must be positive, got {ell}"
        )));
    }
    let lo = ell * T::c(1e-6);
    let root = brent_root(
        |w| stationarity_residual(w, ell),
        lo,
        ell,
        T::epsilon() * T::c(4.0) * ell,
    )?;
    Ok(root.x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn zero_gap_noise() {
        let pi = std::f64::consts::PI;
        assert_relative_eq!(l_massless(0.0), 1.0 / (8.0 * pi * pi), max_relative = 1e-15);
    }

    #[test]
    fn negative_gap_branch_is_continuous() {
        let a = l_massless(1e-12_f64);
        let b = l_massless(-1e-12_f64);
        assert_relative_eq!(a, b, max_relative = 1e-10);
    }

    #[test]
    fn printed_structure_at_unit_half_separation() {
        let pi = std::f64::consts::PI;
        let erfi1 = 1.650_425_758_797_542_8_f64;
        let expected = (-(4.0_f64) - 1.0).exp() * erfi1 / (8.0 * pi.powf(1.5) * 2.0);
        assert_relative_eq!(
            re_m_massless(2.0_f64, 2.0).abs(),
            expected,
            max_relative = 1e-14
        );
    }
}
