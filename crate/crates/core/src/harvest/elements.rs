//! Momentum-space matrix elements of the joint detector state.
//!
//! Every integrand is written with the `e^{-omega^2 - mu^2}` factors pulled out
//! so that the remaining envelope is `e^{-(1+sigma^2) k^2}` (shifted when the
//! gap is negative). Gaussian moments are further divided by their peak, so
//! `QuadSpec::abs_tol` is measured against an integrand of height about one.

use num_complex::Complex;

use super::params::{dispersion, Detector, HarvestParams};
use crate::error::Result;
use crate::quadrature::{integrate_fourier_sine, integrate_semi_infinite, QuadSpec};
use crate::real::Real;
use crate::specfun::dawson_raw;

/// A real value with its absolute error bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate<T> {
    pub value: T,
    pub error: T,
}

impl<T: Real> Estimate<T> {
    pub(crate) fn scaled(self, s: T) -> Self {
        Self {
            value: self.value * s,
            error: self.error * s.abs(),
        }
    }
}

/// `sin(x)/x` with the removable point filled in.
#[inline]
pub(crate) fn sinc<T: Real>(x: T) -> T {
    if x.abs() < T::c(1e-4) {
        let x2 = x * x;
        T::one() - x2 / T::c(6.0) + x2 * x2 / T::c(120.0)
    } else {
        x.sin() / x
    }
}

/// `k^2 / (2 omega_k)`, equal to `k/2` at `mu = 0` (also at `k = 0`).
#[inline]
fn measure<T: Real>(k: T, mu: T) -> T {
    let w = dispersion(k, mu);
    if w == T::zero() {
        T::zero()
    } else {
        k * k / (T::c(2.0) * w)
    }
}

fn envelope_spec<T: Real>(q: &QuadSpec<T>, sigma: T, shift: T, ell: Option<T>) -> QuadSpec<T> {
    let c = T::one() + sigma * sigma;
    q.with_decay(c)
        .with_center(shift.max(T::zero()) / c)
        .with_period(ell.map(|l| T::c(2.0) * T::PI() / l))
}

/// Largest value of `-c k^2 - 2 a w_k` over `k >= 0`.
fn log_peak<T: Real>(a: T, mu: T, c: T) -> T {
    let w = (-a / c).max(mu);
    -c * (w * w - mu * mu) - T::c(2.0) * a * w
}

/// `e^{log_scale} int k^2/(2 w) e^{-(1+s^2) k^2} e^{-2 a w} [sinc(k l)] dk` for a
/// gap-like shift `a`. The integrand is divided by its peak so the absolute
/// tolerance is relative to the envelope height.
fn gaussian_moment<T: Real>(
    a: T,
    mu: T,
    sigma: T,
    ell: Option<T>,
    log_scale: T,
    q: &QuadSpec<T>,
) -> Result<Estimate<T>> {
    let c = T::one() + sigma * sigma;
    let spec = envelope_spec(q, sigma, -a, ell);
    let peak = log_peak(a, mu, c);
    let r = integrate_semi_infinite(
        |k| {
            let w = dispersion(k, mu);
            let base = measure(k, mu) * (-(c * k * k) - T::c(2.0) * a * w - peak).exp();
            match ell {
                Some(l) => base * sinc(k * l),
                None => base,
            }
        },
        &spec,
    )?;
    let scale = (peak + log_scale).exp();
    Ok(Estimate {
        value: r.value * scale,
        error: r.error_estimate * scale,
    })
}

fn prefactor<T: Real>(p: &HarvestParams<T>) -> T {
    p.lambda2() / (T::c(2.0) * T::PI() * T::PI())
}

/// Local excitation probability of one detector.
pub fn compute_l<T: Real>(
    p: &HarvestParams<T>,
    q: &QuadSpec<T>,
    which: Detector,
) -> Result<Estimate<T>> {
    p.validate()?;
    let omega = p.gap(which);
    let mu = p.mass;
    let i = gaussian_moment(omega, mu, p.size, None, -(omega * omega) - mu * mu, q)?;
    Ok(i.scaled(prefactor(p)))
}

/// Cross excitation term `L_AB`; real for this smearing, returned as complex.
pub fn compute_l_cross<T: Real>(p: &HarvestParams<T>, q: &QuadSpec<T>) -> Result<(Complex<T>, T)> {
    p.validate()?;
    let (w, d, mu) = (p.gap_mean, p.gap_split, p.mass);
    let i = gaussian_moment(
        w,
        mu,
        p.size,
        Some(p.separation),
        -(w * w) - d * d - mu * mu,
        q,
    )?;
    let e = i.scaled(prefactor(p));
    Ok((Complex::new(e.value, T::zero()), e.error))
}

/// Real part of the nonlocal term `M`.
pub fn re_m<T: Real>(p: &HarvestParams<T>, q: &QuadSpec<T>) -> Result<Estimate<T>> {
    p.validate()?;
    let (w, d, mu) = (p.gap_mean, p.gap_split, p.mass);
    let mut total = Estimate {
        value: T::zero(),
        error: T::zero(),
    };
    // e^{-(w_k +- d)^2} = e^{-k^2 - mu^2 - d^2} e^{-+2 d w_k}: one moment per sign.
    let shifts: &[T] = if d == T::zero() {
        &[T::zero()]
    } else {
        &[d, -d]
    };
    let weight = if d == T::zero() { T::one() } else { T::c(0.5) };
    for &s in shifts {
        let m = gaussian_moment(
            s,
            mu,
            p.size,
            Some(p.separation),
            -(w * w) - d * d - mu * mu,
            q,
        )?;
        total.value = total.value + weight * m.value;
        total.error = total.error + weight * m.error;
    }
    Ok(total.scaled(-prefactor(p)))
}

/// Imaginary part of the nonlocal term `M`.
///
/// Its amplitude decays only like `1/k^2` without smearing, so the `sin(k l)`
/// oscillation is integrated period by period and extrapolated.
pub fn im_m<T: Real>(p: &HarvestParams<T>, q: &QuadSpec<T>) -> Result<Estimate<T>> {
    p.validate()?;
    let (w, d, mu, ell, sigma) = (p.gap_mean, p.gap_split, p.mass, p.separation, p.size);
    let spec = q.with_period(None);
    let r = integrate_fourier_sine(
        |k| {
            let wk = dispersion(k, mu);
            if wk == T::zero() {
                return T::zero();
            }
            let daw = if d == T::zero() {
                dawson_raw(wk)
            } else {
                T::c(0.5) * (dawson_raw(wk + d) + dawson_raw(wk - d))
            };
            k / (T::c(2.0) * wk * ell) * (-(sigma * sigma * k * k)).exp() * daw
        },
        ell,
        &spec,
    )?;
    let scale = prefactor(p) * (-(w * w)).exp() * T::FRAC_2_SQRT_PI();
    Ok(Estimate {
        value: r.value * scale,
        error: r.error_estimate * scale.abs(),
    })
}

/// `(Re M, Im M)` with their error bounds.
pub fn split_m<T: Real>(
    p: &HarvestParams<T>,
    q: &QuadSpec<T>,
) -> Result<(Estimate<T>, Estimate<T>)> {
    Ok((re_m(p, q)?, im_m(p, q)?))
}

/// The nonlocal term `M` and an error bound on its modulus.
pub fn compute_m<T: Real>(p: &HarvestParams<T>, q: &QuadSpec<T>) -> Result<(Complex<T>, T)> {
    let (re, im) = split_m(p, q)?;
    Ok((Complex::new(re.value, im.value), re.error + im.error))
}

/// Harvesting estimator `|Re M| - L` as one momentum integral (equal gaps only).
pub fn n_plus<T: Real>(p: &HarvestParams<T>, q: &QuadSpec<T>) -> Result<Estimate<T>> {
    p.validate()?;
    if !p.equal_gaps() {
        return Err(crate::Error::invalid(
            "n_plus needs equal gaps (gap_split = 0)",
        ));
    }
    let (w, mu, ell) = (p.gap_mean, p.mass, p.separation);
    let c = T::one() + p.size * p.size;
    let spec = envelope_spec(q, p.size, -w, Some(ell));
    let r = integrate_semi_infinite(
        |k| {
            let wk = dispersion(k, mu);
            let g = (-(c * k * k)).exp();
            measure(k, mu) * (g * sinc(k * ell) - g * (-T::c(2.0) * w * wk).exp())
        },
        &spec,
    )?;
    let scale = prefactor(p) * (-(w * w) - mu * mu).exp();
    Ok(Estimate {
        value: r.value * scale,
        error: r.error_estimate * scale.abs(),
    })
}
