//! Modified Bessel function of the second kind.
//!
//! Real orders follow Temme's series for `x <= 2` and Steed's continued
//! fraction CF2 above, both at the reduced order `|mu| <= 1/2`, then forward
//! recurrence up to the requested order (stable for `K`).

use num_complex::Complex;

use super::gamma::{rgamma1p, temme_gammas};
use crate::error::{Error, Result};
use crate::real::Real;

const MAX_TERMS: usize = 10_000;

/// Returns `(K_mu(x), K_{mu+1}(x))` for `|mu| <= 1/2`, `x > 0`.
fn k_pair_reduced<T: Real>(mu: T, x: T) -> Result<(T, T)> {
    let two = T::c(2.0);
    let half = T::c(0.5);
    let eps = T::epsilon();
    if x <= two {
        let x2 = half * x;
        let pimu = T::PI() * mu;
        let fact = if pimu.abs() < eps {
            T::one()
        } else {
            pimu / pimu.sin()
        };
        let d = -x2.ln();
        let e = mu * d;
        let fact2 = if e.abs() < eps {
            T::one()
        } else {
            e.sinh() / e
        };
        let (gam1, gam2) = temme_gammas(mu);
        let mut ff = fact * (gam1 * e.cosh() + gam2 * fact2 * d);
        let mut sum = ff;
        let ee = e.exp();
        let mut p = half * ee / rgamma1p(mu);
        let mut q = half / (ee * rgamma1p(-mu));
        let mut c = T::one();
        let dd = x2 * x2;
        let mut sum1 = p;
        let mut i = 1usize;
        loop {
            let fi = T::from_usize_lossy(i);
            ff = (fi * ff + p + q) / (fi * fi - mu * mu);
            c = c * dd / fi;
            p = p / (fi - mu);
            q = q / (fi + mu);
            let del = c * ff;
            sum = sum + del;
            sum1 = sum1 + c * (p - fi * ff);
            if del.abs() < sum.abs() * eps {
                break;
            }
            i += 1;
            if i > MAX_TERMS {
                return Err(Error::Convergence {
                    func: "bessel_k (Temme series)",
                    terms: i,
                    partial_sum: sum.as_f64(),
                    tail_bound: del.abs().as_f64(),
                });
            }
        }
        Ok((sum, sum1 * two / x))
    } else {
        let mut b = two * (T::one() + x);
        let mut d = b.recip();
        let mut h = d;
        let mut delh = d;
        let mut q1 = T::zero();
        let mut q2 = T::one();
        let a1 = T::c(0.25) - mu * mu;
        let mut q = a1;
        let mut c = a1;
        let mut a = -a1;
        let mut s = T::one() + q * delh;
        let mut i = 2usize;
        loop {
            let fi = T::from_usize_lossy(i);
            a = a - two * (fi - T::one());
            c = -a * c / fi;
            let qnew = (q1 - b * q2) / a;
            q1 = q2;
            q2 = qnew;
            q = q + c * qnew;
            b = b + two;
            d = (b + a * d).recip();
            delh = (b * d - T::one()) * delh;
            h = h + delh;
            let dels = q * delh;
            s = s + dels;
            if (dels / s).abs() < eps {
                break;
            }
            i += 1;
            if i > MAX_TERMS {
                return Err(Error::Convergence {
                    func: "bessel_k (Steed CF2)",
                    terms: i,
                    partial_sum: s.as_f64(),
                    tail_bound: dels.abs().as_f64(),
                });
            }
        }
        h = a1 * h;
        let kmu = (T::PI() / (two * x)).sqrt() * (-x).exp() / s;
        let k1 = kmu * (mu + x + half - h) / x;
        Ok((kmu, k1))
    }
}

/// `K_nu(x)` for real order and `x > 0`. `K_{-nu} = K_nu`.
pub fn bessel_k<T: Real>(nu: T, x: T) -> Result<T> {
    if !(x > T::zero()) || !x.is_finite() || !nu.is_finite() {
        return Err(Error::domain(
            "bessel_k",
            format!("need finite order and x > 0, got nu = {}, x = {}", nu, x),
        ));
    }
    let nu = nu.abs();
    let nl = (nu + T::c(0.5)).floor();
    let mu = nu - nl;
    let steps = nl.to_usize().unwrap_or(usize::MAX);
    if steps > MAX_TERMS {
        return Err(Error::domain("bessel_k", format!("order {} too large", nu)));
    }
    let (mut kmu, mut k1) = k_pair_reduced(mu, x)?;
    let two_over_x = T::c(2.0) / x;
    for i in 1..=steps {
        let next = (mu + T::from_usize_lossy(i)) * two_over_x * k1 + kmu;
        kmu = k1;
        k1 = next;
    }
    if !kmu.is_finite() {
        return Err(Error::Overflow {
            func: "bessel_k",
            arg: x.as_f64(),
        });
    }
    Ok(kmu)
}

/// `K_{k+1/2}(z)` for complex `z` with `Re z > 0`, from the terminating closed form
/// `sqrt(pi/(2z)) e^{-z} sum_{j<=k} (k+j)! / (j! (k-j)! (2z)^j)`.
pub fn bessel_k_half_integer<T: Real>(k: u32, z: Complex<T>) -> Result<Complex<T>> {
    if !(z.re > T::zero()) {
        return Err(Error::domain(
            "bessel_k_half_integer",
            format!("need Re z > 0, got {} + {}i", z.re, z.im),
        ));
    }
    let two_z = z * T::c(2.0);
    let mut coeff = T::one();
    let mut power = Complex::new(T::one(), T::zero());
    let mut sum = Complex::new(T::one(), T::zero());
    for j in 1..=k {
        // (k+j)!/(j!(k-j)!) from the previous coefficient
        coeff = coeff * T::c(f64::from((k + j) * (k + 1 - j))) / T::c(f64::from(j));
        power = power / two_z;
        sum = sum + power * coeff;
    }
    let pref = (Complex::new(T::PI(), T::zero()) / two_z).sqrt() * (-z).exp();
    let v = pref * sum;
    if !(v.re.is_finite() && v.im.is_finite()) {
        return Err(Error::Overflow {
            func: "bessel_k_half_integer",
            arg: z.norm().as_f64(),
        });
    }
    Ok(v)
}
