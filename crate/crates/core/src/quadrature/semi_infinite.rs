use super::{integrate, QuadResult, QuadSpec};
use crate::error::{Error, Result};
use crate::real::Real;

/// Truncation point for an `exp(-c (k - k0)^2)` envelope:
/// `k0 + sqrt(ln(10/abs_tol)/c) + 2`, so the envelope at the cutoff sits well
/// below `abs_tol/10`.
pub fn gaussian_cutoff<T: Real>(spec: &QuadSpec<T>) -> Result<T> {
    let c = spec.gaussian_decay_rate;
    if !(c > T::zero()) {
        return Err(Error::invalid(
            "semi-infinite integration needs a positive gaussian_decay_rate",
        ));
    }
    let tol = spec.abs_tol.max(T::min_positive_value());
    let reach = ((T::c(10.0) / tol).ln() / c).sqrt();
    Ok(spec.envelope_center.max(T::zero()) + reach + T::c(2.0))
}

/// `int_0^inf f` for an integrand dominated by the Gaussian envelope in `spec`.
///
/// The reported error includes the envelope tail bound `abs_tol/10`.
pub fn integrate_semi_infinite<T: Real, F: FnMut(T) -> T>(
    f: F,
    spec: &QuadSpec<T>,
) -> Result<QuadResult<T>> {
    spec.validate()?;
    let cutoff = gaussian_cutoff(spec)?;
    let mut r = integrate(f, T::zero(), cutoff, spec)?;
    r.error_estimate = r.error_estimate + spec.abs_tol * T::c(0.1);
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn gaussian_moments() {
        let spec = QuadSpec::new(1e-12, 1e-20).unwrap().with_decay(2.0);
        let pi = std::f64::consts::PI;
        let m0 = integrate_semi_infinite(|k: f64| (-2.0 * k * k).exp(), &spec).unwrap();
        assert_relative_eq!(m0.value, 0.5 * (pi / 2.0).sqrt(), max_relative = 1e-12);
        let m2 = integrate_semi_infinite(|k: f64| k * k * (-2.0 * k * k).exp(), &spec).unwrap();
        assert_relative_eq!(m2.value, (pi / 2.0).sqrt() / 8.0, max_relative = 1e-12);
    }

    #[test]
    fn cutoff_respects_envelope() {
        let spec = QuadSpec::new(1e-10, 1e-15_f64).unwrap().with_decay(1.3);
        let k = gaussian_cutoff(&spec).unwrap();
        assert!((-1.3 * k * k).exp() < 1e-16);
        assert!(gaussian_cutoff(&spec.with_decay(0.0)).is_err());
    }

    #[test]
    fn shifted_envelope() {
        // exp(-(k-3)^2) over [0, inf) = sqrt(pi)/2 (1 + erf(3))
        let spec = QuadSpec::new(1e-12, 1e-20).unwrap().with_center(3.0);
        let r = integrate_semi_infinite(|k: f64| (-(k - 3.0) * (k - 3.0)).exp(), &spec).unwrap();
        let exact = std::f64::consts::PI.sqrt() / 2.0 * (1.0 + crate::specfun::erf(3.0).unwrap());
        assert_relative_eq!(r.value, exact, max_relative = 1e-12);
    }
}
