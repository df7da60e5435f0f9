//! Small-mass, small-size expansion of the harvesting estimator around the
//! massless pointlike closed form.

use super::massless::n_plus_massless;
use crate::error::{Error, Result};
use crate::harvest::HarvestParams;
use crate::quadrature::{integrate, QuadSpec};
use crate::real::Real;
use crate::specfun::{dawson_raw, erfc_raw, erfcx_nonneg, erfi, hyp2f2, Accuracy};

/// Above this squared argument the hypergeometric forms cancel badly and the
/// equivalent integrals are used instead.
const SERIES_LIMIT: f64 = 4.0;

/// Coefficients of `N+ ~ n0 + mu^2/2 d2_mu + sigma^2/2 d2_sigma`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TaylorCoefficients<T> {
    pub n0: T,
    pub d2_mu: T,
    pub d2_sigma: T,
    /// The `sigma^2 mu^2` term is never included.
    pub sigma_mu_cross_neglected: bool,
}

impl<T: Real> TaylorCoefficients<T> {
    /// Evaluates the truncated expansion; even in both arguments.
    pub fn evaluate(&self, mu: T, sigma: T) -> T {
        let half = T::c(0.5);
        self.n0 + half * mu * mu * self.d2_mu + half * sigma * sigma * self.d2_sigma
    }
}

fn tight_quad<T: Real>() -> QuadSpec<T> {
    let rel = (T::epsilon() * T::c(64.0)).max(T::c(1e-14));
    QuadSpec::new(rel, T::zero()).expect("valid tolerance")
}

/// `int_0^x erfcx(t) dt`.
fn erfcx_integral<T: Real>(x: T) -> Result<T> {
    Ok(integrate(erfcx_nonneg, T::zero(), x, &tight_quad())?.value)
}

/// Separation-only part `Q(l) = (l^2/12) 2F2(1,1;2,5/2;-l^2/4) - (2/l) D(l/2)`.
pub(crate) fn q_of_ell<T: Real>(ell: T) -> Result<T> {
    let z = T::c(0.25) * ell * ell;
    let half = T::c(0.5) * ell;
    let series_part = if z <= T::c(SERIES_LIMIT) {
        let acc = Accuracy::default();
        ell * ell / T::c(12.0) * hyp2f2(T::one(), T::one(), T::c(2.0), T::c(2.5), -z, &acc)?
    } else {
        // (l^2/12) 2F2(...) = int_0^{l/2} (y - D(y)) / y^2 dy
        let f = |y: T| {
            if y < T::c(1e-3) {
                let y2 = y * y;
                T::c(2.0 / 3.0) * y - T::c(4.0 / 15.0) * y * y2 + T::c(8.0 / 105.0) * y * y2 * y2
            } else {
                (y - dawson_raw(y)) / (y * y)
            }
        };
        integrate(f, T::zero(), half, &tight_quad())?.value
    };
    Ok(series_part - T::c(2.0) / ell * dawson_raw(half))
}

/// Gap-only part `h(w) = e^{-w^2} (w^2 2F2(1,1;2,3/2;w^2) - (pi/2) erfi(w))`,
/// equal to `-sqrt(pi) e^{-w^2} int_0^w erfcx`.
pub(crate) fn h_of_omega<T: Real>(omega: T) -> Result<T> {
    let e = (-(omega * omega)).exp();
    if omega > T::c(SERIES_LIMIT.sqrt()) {
        return Ok(-T::PI().sqrt() * e * erfcx_integral(omega)?);
    }
    let acc = Accuracy::default();
    let w2 = omega * omega;
    let p = w2 * hyp2f2(T::one(), T::one(), T::c(2.0), T::c(1.5), w2, &acc)?
        - T::FRAC_PI_2() * erfi(omega)?;
    Ok(e * p)
}

/// `d^2 N+ / d mu^2` at `mu = 0`, pointlike detectors.
pub fn d2n_dmu2_at0<T: Real>(omega: T, ell: T) -> Result<T> {
    check(ell)?;
    let e = (-(omega * omega)).exp();
    let v = (T::one() + q_of_ell(ell)?) * e + h_of_omega(omega)?;
    Ok(v / (T::c(4.0) * T::PI() * T::PI()))
}

/// `sigma^2` coefficients of the massless estimator and of its mass curvature:
/// `(dN0/d(sigma^2), d(d2N/dmu2)/d(sigma^2))`.
pub fn sigma2_corrections<T: Real>(omega: T, ell: T) -> Result<(T, T)> {
    check(ell)?;
    let pi2 = T::PI() * T::PI();
    let e = (-(omega * omega)).exp();
    let half = T::c(0.5) * ell;
    let daw = dawson_raw(half);
    let w2 = omega * omega;
    let erfcx_term = if omega >= T::zero() {
        T::PI().sqrt() * omega * (T::c(3.0) + T::c(2.0) * w2) * erfcx_nonneg(omega) * e
    } else {
        T::PI().sqrt() * omega * (T::c(3.0) + T::c(2.0) * w2) * erfc_raw(omega)
    };
    let dn0 = (e * (T::one() + T::c(2.0) * w2 + (ell - T::c(2.0) / ell) * daw) - erfcx_term)
        / (T::c(16.0) * pi2);
    let c = T::c(2.0) * daw / ell;
    let dd2 = (T::c(1.5) * omega * T::PI().sqrt() * erfc_raw(omega)
        - e * (T::one() + c * (half * half - T::one())))
        / (T::c(4.0) * pi2);
    Ok((dn0, dd2))
}

/// All expansion coefficients at `(omega, ell)`.
pub fn taylor_coefficients<T: Real>(omega: T, ell: T) -> Result<TaylorCoefficients<T>> {
    let (dn0, _) = sigma2_corrections(omega, ell)?;
    Ok(TaylorCoefficients {
        n0: n_plus_massless(omega, ell),
        d2_mu: d2n_dmu2_at0(omega, ell)?,
        d2_sigma: T::c(2.0) * dn0,
        sigma_mu_cross_neglected: true,
    })
}

/// Expansion estimate of the harvesting estimator (equal gaps).
pub fn taylor_n_plus<T: Real>(p: &HarvestParams<T>) -> Result<T> {
    p.validate()?;
    if !p.equal_gaps() {
        return Err(Error::invalid("the expansion assumes equal gaps"));
    }
    let c = taylor_coefficients(p.gap_mean, p.separation)?;
    Ok(p.lambda2() * c.evaluate(p.mass, p.size))
}

fn check<T: Real>(ell: T) -> Result<()> {
    if ell > T::zero() && ell.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(format!(
            "separation must be positive, got {ell}"
        )))
    }
}
