//! Independent evaluation of the matrix elements from their spacetime form.
//!
//! The switching integrals are done numerically in two dimensions under the
//! momentum integral, instead of using their Gaussian closed forms. Only the
//! angular and spatial-smearing integrals (which give `sinc(k l) e^{-k^2 sigma^2}`)
//! are done by hand. Intended for validation: slow, and it needs `sigma > 0`
//! so the momentum integrand of the imaginary parts is Gaussian damped.

use std::cell::RefCell;
use std::collections::HashMap;

use num_complex::Complex;

use super::elements::sinc;
use super::params::{dispersion, Detector, HarvestParams};
use crate::error::{Error, Result};
use crate::quadrature::{integrate_2d, integrate_semi_infinite, QuadSpec};
use crate::real::Real;

/// Tolerances of the oracle (outer momentum integral and inner time integrals).
#[derive(Debug, Clone, Copy)]
pub struct OracleSpec<T> {
    pub outer: QuadSpec<T>,
    pub inner: QuadSpec<T>,
}

impl<T: Real> Default for OracleSpec<T> {
    fn default() -> Self {
        Self {
            outer: QuadSpec::new(T::c(1e-9), T::c(1e-12)).expect("valid"),
            inner: QuadSpec::new(T::c(1e-10), T::c(1e-12)).expect("valid"),
        }
    }
}

/// Half-width `t` with `e^{-t^2/(2 width)} < abs_tol`.
fn time_box<T: Real>(inner: &QuadSpec<T>, width: T) -> T {
    let tol = inner.abs_tol.max(T::c(1e-300));
    (T::c(2.0) * width * (T::one() / tol).ln()).sqrt() + T::c(0.5)
}

fn chi_product<T: Real>(t: T, tp: T) -> T {
    (-(t * t + tp * tp) * T::c(0.5)).exp() / (T::c(2.0) * T::PI())
}

/// `int int chi(t) chi(t') e^{-i a t + i b t'} dt dt'` on a box.
fn switching_pair<T: Real>(a: T, b: T, inner: &QuadSpec<T>) -> Result<Complex<T>> {
    let tm = time_box(inner, T::one());
    let bx = (-tm, tm);
    let re = integrate_2d(
        |t, tp| chi_product(t, tp) * (b * tp - a * t).cos(),
        bx,
        bx,
        inner,
    )?;
    let im = integrate_2d(
        |t, tp| chi_product(t, tp) * (b * tp - a * t).sin(),
        bx,
        bx,
        inner,
    )?;
    Ok(Complex::new(re.value, im.value))
}

/// `int int chi chi e^{i(wa t + wb t')} e^{-i w |t - t'|}` in the rotated
/// coordinates `v = t + t'`, `s = t - t'`, split at `s = 0`.
fn time_ordered<T: Real>(wa: T, wb: T, w: T, inner: &QuadSpec<T>) -> Result<Complex<T>> {
    let tm = time_box(inner, T::c(2.0));
    let wbar = T::c(0.5) * (wa + wb);
    let d = T::c(0.5) * (wa - wb);
    let weight = |v: T, s: T| (-(v * v + s * s) * T::c(0.25)).exp() / (T::c(4.0) * T::PI());
    let phase = |v: T, s: T| wbar * v + d * s - w * s.abs();
    let mut total = Complex::new(T::zero(), T::zero());
    for half in [(T::zero(), tm), (-tm, T::zero())] {
        let re = integrate_2d(
            |v, s| weight(v, s) * phase(v, s).cos(),
            (-tm, tm),
            half,
            inner,
        )?;
        let im = integrate_2d(
            |v, s| weight(v, s) * phase(v, s).sin(),
            (-tm, tm),
            half,
            inner,
        )?;
        total = total + Complex::new(re.value, im.value);
    }
    Ok(total)
}

/// `int_0^inf g(k) dk`; `decay` is the Gaussian rate of the integrand's envelope
/// (`1 + sigma^2` when the switching integrals supply `e^{-k^2}`, else `sigma^2`).
fn momentum_integral<T: Real, F>(mut g: F, decay: T, spec: &OracleSpec<T>) -> Result<Complex<T>>
where
    F: FnMut(T) -> Result<Complex<T>>,
{
    if !(decay > T::zero()) {
        return Err(Error::invalid("time-domain oracle needs sigma > 0"));
    }
    let outer = spec.outer.with_decay(decay);
    // Real and imaginary parts share nodes; each time integral is done once.
    let cache: RefCell<HashMap<u64, Complex<T>>> = RefCell::new(HashMap::new());
    let failure: RefCell<Option<Error>> = RefCell::new(None);
    let eval = |k: T| -> Complex<T> {
        let key = k.as_f64().to_bits();
        if let Some(v) = cache.borrow().get(&key) {
            return *v;
        }
        if failure.borrow().is_some() {
            return Complex::new(T::zero(), T::zero());
        }
        let v = match g(k) {
            Ok(v) => v,
            Err(e) => {
                *failure.borrow_mut() = Some(e);
                Complex::new(T::zero(), T::zero())
            }
        };
        cache.borrow_mut().insert(key, v);
        v
    };
    let eval = RefCell::new(eval);
    let re = integrate_semi_infinite(|k| (eval.borrow_mut())(k).re, &outer);
    let im = integrate_semi_infinite(|k| (eval.borrow_mut())(k).im, &outer);
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    Ok(Complex::new(re?.value, im?.value))
}

fn prefactor<T: Real>(p: &HarvestParams<T>) -> T {
    p.lambda2() / (T::c(2.0) * T::PI() * T::PI())
}

/// `L_ii` of one detector from the time-domain form.
pub fn oracle_l<T: Real>(p: &HarvestParams<T>, which: Detector, spec: &OracleSpec<T>) -> Result<T> {
    p.validate()?;
    let gap = p.gap(which);
    let (mu, sigma) = (p.mass, p.size);
    let v = momentum_integral(
        |k| {
            let w = dispersion(k, mu);
            let t = switching_pair(gap + w, gap + w, &spec.inner)?;
            Ok(t * (k * k / (T::c(2.0) * w) * (-(sigma * sigma * k * k)).exp()))
        },
        T::one() + sigma * sigma,
        spec,
    )?;
    Ok(v.re * prefactor(p))
}

/// `L_AB` from the time-domain form.
pub fn oracle_l_cross<T: Real>(p: &HarvestParams<T>, spec: &OracleSpec<T>) -> Result<Complex<T>> {
    p.validate()?;
    let (ga, gb) = (p.gap(Detector::A), p.gap(Detector::B));
    let (mu, sigma, ell) = (p.mass, p.size, p.separation);
    let v = momentum_integral(
        |k| {
            let w = dispersion(k, mu);
            let t = switching_pair(ga + w, gb + w, &spec.inner)?;
            Ok(t * (k * k / (T::c(2.0) * w) * (-(sigma * sigma * k * k)).exp() * sinc(k * ell)))
        },
        T::one() + sigma * sigma,
        spec,
    )?;
    Ok(v * prefactor(p))
}

/// `M` from the time-ordered spacetime form.
pub fn oracle_m<T: Real>(p: &HarvestParams<T>, spec: &OracleSpec<T>) -> Result<Complex<T>> {
    p.validate()?;
    let (ga, gb) = (p.gap(Detector::A), p.gap(Detector::B));
    let (mu, sigma, ell) = (p.mass, p.size, p.separation);
    let v = momentum_integral(
        |k| {
            let w = dispersion(k, mu);
            let t = time_ordered(ga, gb, w, &spec.inner)?;
            Ok(t * (k * k / (T::c(2.0) * w) * (-(sigma * sigma * k * k)).exp() * sinc(k * ell)))
        },
        sigma * sigma,
        spec,
    )?;
    Ok(v * (-prefactor(p)))
}
