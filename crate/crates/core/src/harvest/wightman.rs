use num_complex::Complex;

use crate::error::{Error, Result};
use crate::real::Real;
use crate::specfun::{bessel_k, bessel_k_half_integer, gamma_half_integer};

/// Vacuum Wightman function of a free scalar of mass `m` in `n` spacetime
/// dimensions with the `i epsilon` regulator:
/// `(2 pi)^{-n/2} (m / s)^{n/2-1} K_{n/2-1}(m s)`, `s^2 = -(dt - i eps)^2 + dx^2`.
///
/// Odd `n` uses the exact complex closed form of the half-integer Bessel
/// function. Even `n` with a non-real `s` is outside the real Bessel
/// implementation and returns a domain error, as does `m = 0` combined with
/// `n <= 2` (infrared divergence).
pub fn wightman<T: Real>(delta_t: T, delta_x: T, m: T, n: u32, epsilon: T) -> Result<Complex<T>> {
    if !(epsilon > T::zero()) {
        return Err(Error::domain(
            "wightman",
            format!("regulator must be positive, got {}", epsilon),
        ));
    }
    if n < 1 {
        return Err(Error::domain("wightman", "dimension must be at least 1"));
    }
    if m < T::zero() || delta_x < T::zero() {
        return Err(Error::domain(
            "wightman",
            "mass and distance must be non-negative",
        ));
    }
    let shifted = Complex::new(delta_t, -epsilon);
    let s2 = -(shifted * shifted) + Complex::new(delta_x * delta_x, T::zero());
    let s = s2.sqrt();
    let two_pi = T::c(2.0) * T::PI();
    let half_n = T::c(f64::from(n) / 2.0);
    let order = half_n - T::one();

    if m == T::zero() {
        if n <= 2 {
            return Err(Error::domain(
                "wightman",
                "massless field is infrared divergent for n <= 2",
            ));
        }
        // Gamma(n/2 - 1) / (4 pi^{n/2} s^{n-2})
        let g: T = gamma_half_integer(n - 2);
        let denom = s.powf(T::c(f64::from(n - 2))) * (T::c(4.0) * T::PI().powf(half_n));
        return Ok(Complex::new(g, T::zero()) / denom);
    }

    let z = s * m;
    let pref = (s.inv() * m).powf(order) / two_pi.powf(half_n);
    let k = if n % 2 == 1 {
        let k_int = (n - 3) / 2;
        if n == 1 {
            // K_{-1/2} = K_{1/2}
            bessel_k_half_integer(0, z)?
        } else {
            bessel_k_half_integer(k_int, z)?
        }
    } else {
        if z.im.abs() > T::epsilon() * z.re.abs() {
            return Err(Error::domain(
                "wightman",
                "integer-order Bessel function needs a real argument; use an odd dimension or epsilon -> 0",
            ));
        }
        Complex::new(bessel_k(order, z.re)?, T::zero())
    };
    Ok(pref * k)
}
