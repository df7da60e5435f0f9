//! Error function family on the real line.
//!
//! Small arguments use the everywhere-positive series
//! `erf(x) = 2/sqrt(pi) e^{-x^2} sum (2x^2)^n x / (2n+1)!!`, large arguments the
//! Laplace continued fraction for `erfcx`. Dawson's integral switches from its
//! Maclaurin series to the asymptotic expansion at `|x| = 6`, where the
//! smallest asymptotic term is below `f64::EPSILON`.

use crate::error::{Error, Result};
use crate::real::Real;

const DAWSON_SWITCH: f64 = 6.0;
const CF_MAX_TERMS: usize = 1000;

/// `sum_{n>=0} (2x^2)^n x / (2n+1)!!`, so that `erf(x) = 2/sqrt(pi) e^{-x^2} * s`.
fn erf_series_sum<T: Real>(x: T) -> T {
    let two_x2 = T::c(2.0) * x * x;
    let mut term = x;
    let mut sum = x;
    let mut n = 0usize;
    loop {
        n += 1;
        term = term * two_x2 / T::from_usize_lossy(2 * n + 1);
        sum = sum + term;
        if term.abs() <= T::epsilon() * sum.abs() * T::c(0.25) || n > 200 {
            return sum;
        }
    }
}

/// Modified Lentz evaluation of `x + (1/2)/(x + 1/(x + (3/2)/(x + ...)))`.
fn erfcx_continued_fraction<T: Real>(x: T) -> T {
    let tiny = T::min_positive_value().sqrt();
    let mut f = x;
    let mut c = x;
    let mut d = T::zero();
    for n in 1..CF_MAX_TERMS {
        let a = T::from_usize_lossy(n) * T::c(0.5);
        d = x + a * d;
        if d.abs() < tiny {
            d = tiny;
        }
        d = d.recip();
        c = x + a / c;
        if c.abs() < tiny {
            c = tiny;
        }
        let delta = c * d;
        f = f * delta;
        if (delta - T::one()).abs() <= T::epsilon() {
            break;
        }
    }
    (T::PI().sqrt() * f).recip()
}

/// Scaled complementary error function for `x >= 0`; never overflows.
pub(crate) fn erfcx_nonneg<T: Real>(x: T) -> T {
    debug_assert!(x >= T::zero());
    if x < T::one() {
        x.exp_sq() - T::FRAC_2_SQRT_PI() * erf_series_sum(x)
    } else {
        erfcx_continued_fraction(x)
    }
}

fn finite<T: Real>(func: &'static str, x: T) -> Result<T> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(Error::domain(func, format!("non-finite argument {}", x)))
    }
}

/// Error function.
pub fn erf<T: Real>(x: T) -> Result<T> {
    finite("erf", x).map(erf_raw)
}

/// Complementary error function, accurate in relative terms for large positive `x`.
pub fn erfc<T: Real>(x: T) -> Result<T> {
    finite("erfc", x).map(erfc_raw)
}

/// Dawson's integral `D(x) = e^{-x^2} int_0^x e^{y^2} dy`.
pub fn dawson<T: Real>(x: T) -> Result<T> {
    finite("dawson", x).map(dawson_raw)
}

pub(crate) fn erf_raw<T: Real>(x: T) -> T {
    if x.is_nan() {
        return x;
    }
    let ax = x.abs();
    let v = if ax < T::one() {
        T::FRAC_2_SQRT_PI() * ax.exp_neg_sq() * erf_series_sum(ax)
    } else {
        T::one() - erfcx_nonneg(ax) * ax.exp_neg_sq()
    };
    if x < T::zero() {
        -v
    } else {
        v
    }
}

pub(crate) fn erfc_raw<T: Real>(x: T) -> T {
    if x.is_nan() {
        return x;
    }
    if x < T::zero() {
        return T::c(2.0) - erfc_raw(-x);
    }
    if x < T::one() {
        T::one() - T::FRAC_2_SQRT_PI() * x.exp_neg_sq() * erf_series_sum(x)
    } else {
        erfcx_nonneg(x) * x.exp_neg_sq()
    }
}

/// Scaled complementary error function `e^{x^2} erfc(x)`.
///
/// Overflows for large negative arguments, where it grows like `2 e^{x^2}`.
pub fn erfcx<T: Real>(x: T) -> Result<T> {
    finite("erfcx", x)?;
    if x >= T::zero() {
        return Ok(erfcx_nonneg(x));
    }
    let v = T::c(2.0) * x.exp_sq() - erfcx_nonneg(-x);
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Overflow {
            func: "erfcx",
            arg: x.as_f64(),
        })
    }
}

/// `int_0^x e^{y^2} dy` by its Maclaurin series (all terms positive for `x > 0`).
fn imag_error_series<T: Real>(x: T) -> T {
    let x2 = x * x;
    let mut t = x;
    let mut sum = x;
    let mut k = 0usize;
    loop {
        k += 1;
        t = t * x2 / T::from_usize_lossy(k);
        let contrib = t / T::from_usize_lossy(2 * k + 1);
        sum = sum + contrib;
        if (T::from_usize_lossy(k) > x2 && contrib.abs() <= T::epsilon() * sum.abs() * T::c(0.25))
            || k > 5000
        {
            return sum;
        }
    }
}

/// Asymptotic series `1/(2x) sum (2k-1)!!/(2x^2)^k`, truncated at its smallest term.
fn dawson_asymptotic<T: Real>(x: T) -> T {
    let inv = (T::c(2.0) * x * x).recip();
    let mut term = T::one();
    let mut sum = T::one();
    let mut k = 0usize;
    loop {
        k += 1;
        let next = term * T::from_usize_lossy(2 * k - 1) * inv;
        if next.abs() >= term.abs() || k > 200 {
            break;
        }
        term = next;
        sum = sum + term;
        if term.abs() <= T::epsilon() * sum.abs() * T::c(0.25) {
            break;
        }
    }
    sum / (T::c(2.0) * x)
}

pub(crate) fn dawson_raw<T: Real>(x: T) -> T {
    if x.is_nan() {
        return x;
    }
    let ax = x.abs();
    let v = if ax < T::c(DAWSON_SWITCH) {
        ax.exp_neg_sq() * imag_error_series(ax)
    } else {
        dawson_asymptotic(ax)
    };
    if x < T::zero() {
        -v
    } else {
        v
    }
}

/// Imaginary error function `erfi(x) = -i erf(ix)`.
///
/// Returns [`Error::Overflow`] once `e^{x^2}` leaves the representable range
/// (`|x|` a little above 26 in double precision).
pub fn erfi<T: Real>(x: T) -> Result<T> {
    finite("erfi", x)?;
    let ax = x.abs();
    let v = if ax < T::c(DAWSON_SWITCH) {
        T::FRAC_2_SQRT_PI() * imag_error_series(ax)
    } else {
        T::FRAC_2_SQRT_PI() * ax.exp_sq() * dawson_asymptotic(ax)
    };
    if !v.is_finite() {
        return Err(Error::Overflow {
            func: "erfi",
            arg: x.as_f64(),
        });
    }
    Ok(if x < T::zero() { -v } else { v })
}

/// `e^{-x^2} erfi(x) = 2/sqrt(pi) D(x)`, bounded for all real `x`.
pub fn erfi_scaled<T: Real>(x: T) -> T {
    T::FRAC_2_SQRT_PI() * dawson_raw(x)
}
