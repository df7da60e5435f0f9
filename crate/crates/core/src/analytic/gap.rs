//! Optimal gap near `l/2`: a second-order expansion of the stationarity
//! condition of the Taylor estimator.

use super::taylor::{h_of_omega, q_of_ell};
use crate::error::{Error, Result};
use crate::real::Real;
use crate::specfun::{dawson_raw, erfc_raw};

/// How the stationarity condition is expanded in `eps = omega - l/2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ExpansionConvention {
    /// `f1 - f2 eps + f3 eps^2 / 2 = 0`, root nearest zero, mass term `mu^2 d2N`.
    /// Sign convention behind the reference fit constants.
    #[default]
    Standard,
    /// Taylor expansion of `dN/domega`, `f1 + f2 eps + f3 eps^2 / 2 = 0`, root
    /// with negative curvature, mass term `mu^2/2 d2N`.
    Consistent,
}

/// Optimal gap and its decomposition `eps = E(l) + A(l) sigma^2 + B(l) mu^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapOptimum<T> {
    pub omega_max: T,
    pub epsilon: T,
    pub e_of_ell: T,
    /// Coefficient of `sigma^2`.
    pub a_of_ell: T,
    /// Coefficient of `mu^2`.
    pub b_of_ell: T,
}

/// First three gap derivatives of the three Taylor coefficients at `omega`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct GapDerivatives<T> {
    pub n0: [T; 3],
    pub d2_mu: [T; 3],
    pub s: [T; 3],
}

pub(crate) fn gap_derivatives<T: Real>(omega: T, ell: T) -> Result<GapDerivatives<T>> {
    let w = omega;
    let w2 = w * w;
    let e = (-w2).exp();
    let sqrt_pi = T::PI().sqrt();
    let erfc = erfc_raw(w);
    let two = T::c(2.0);
    let pi2 = T::PI() * T::PI();
    let ek = [
        -two * w * e,
        (T::c(4.0) * w2 - two) * e,
        (T::c(12.0) * w - T::c(8.0) * w2 * w) * e,
    ];

    let half = T::c(0.5) * ell;
    let daw = dawson_raw(half);
    let c = two * daw / ell;
    let u = [
        sqrt_pi * erfc - two * w * e,
        (T::c(4.0) * w2 - T::c(4.0)) * e,
        (T::c(16.0) * w - T::c(8.0) * w2 * w) * e,
    ];
    let n0 = [0, 1, 2].map(|k| ((c - T::one()) * ek[k] + u[k]) / (T::c(8.0) * pi2));

    let h0 = h_of_omega(w)?;
    let h1 = -two * w * h0 - sqrt_pi * erfc;
    let h2 = -two * h0 - two * w * h1 + two * e;
    let h3 = -T::c(4.0) * h1 - two * w * h2 - T::c(4.0) * w * e;
    let q = q_of_ell(ell)?;
    let h = [h1, h2, h3];
    let d2_mu = [0, 1, 2].map(|k| ((T::one() + q) * ek[k] + h[k]) / (T::c(4.0) * pi2));

    let w3 = w2 * w;
    let w4 = w2 * w2;
    let w5 = w4 * w;
    let r = (ell - two / ell) * daw;
    let v = [
        e * (two * w - T::c(4.0) * w3),
        e * (T::c(8.0) * w4 - T::c(16.0) * w2 + two),
        e * (-T::c(16.0) * w5 + T::c(64.0) * w3 - T::c(36.0) * w),
    ];
    let ww = [
        sqrt_pi * (T::c(3.0) + T::c(6.0) * w2) * erfc - two * (T::c(3.0) * w + two * w3) * e,
        T::c(12.0) * sqrt_pi * w * erfc + e * (T::c(8.0) * w4 - T::c(12.0) * w2 - T::c(12.0)),
        T::c(12.0) * sqrt_pi * erfc + e * (-T::c(16.0) * w5 + T::c(56.0) * w3 - T::c(24.0) * w),
    ];
    let s = [0, 1, 2].map(|k| (r * ek[k] + v[k] - ww[k]) / (T::c(16.0) * pi2));
    Ok(GapDerivatives { n0, d2_mu, s })
}

/// Quadratic `a x^2 + b x + c` in the sign convention of `conv`.
struct Stationarity<T> {
    f: [T; 3],
    conv: ExpansionConvention,
}

impl<T: Real> Stationarity<T> {
    fn new(d: &GapDerivatives<T>, mu: T, sigma: T, conv: ExpansionConvention) -> Self {
        let mass_weight = match conv {
            ExpansionConvention::Standard => mu * mu,
            ExpansionConvention::Consistent => T::c(0.5) * mu * mu,
        };
        let s2 = sigma * sigma;
        let f = [0, 1, 2].map(|k| d.n0[k] + mass_weight * d.d2_mu[k] + s2 * d.s[k]);
        Self { f, conv }
    }

    fn sign(&self) -> T {
        match self.conv {
            ExpansionConvention::Standard => -T::one(),
            ExpansionConvention::Consistent => T::one(),
        }
    }

    /// Value of the quadratic at `x` for coefficient triple `g`.
    fn eval(&self, g: &[T; 3], x: T) -> T {
        g[0] + self.sign() * g[1] * x + T::c(0.5) * g[2] * x * x
    }

    fn slope(&self, x: T) -> T {
        self.sign() * self.f[1] + self.f[2] * x
    }

    fn root(&self) -> Result<T> {
        let a = T::c(0.5) * self.f[2];
        let b = self.sign() * self.f[1];
        let c = self.f[0];
        if a == T::zero() {
            if b == T::zero() {
                return Err(Error::Expansion("degenerate stationarity condition".into()));
            }
            return Ok(-c / b);
        }
        let disc = b * b - T::c(4.0) * a * c;
        if disc < T::zero() {
            return Err(Error::Expansion(format!(
                "no real root (discriminant {disc:e})"
            )));
        }
        let qq = -T::c(0.5) * (b + b.signum() * disc.sqrt());
        let roots = [qq / a, if qq == T::zero() { T::zero() } else { c / qq }];
        let pick = match self.conv {
            ExpansionConvention::Standard => {
                if roots[0].abs() <= roots[1].abs() {
                    roots[0]
                } else {
                    roots[1]
                }
            }
            ExpansionConvention::Consistent => {
                // maximum of N: dN/domega decreasing through the root
                let down: Vec<T> = roots
                    .iter()
                    .copied()
                    .filter(|&r| self.slope(r) < T::zero())
                    .collect();
                match down.as_slice() {
                    [r] => *r,
                    _ => {
                        return Err(Error::Expansion(
                            "no maximizing root of the stationarity condition".into(),
                        ));
                    }
                }
            }
        };
        Ok(pick)
    }
}

/// Solves the expanded stationarity condition around `omega = l/2`.
pub fn epsilon_solve<T: Real>(
    ell: T,
    mu: T,
    sigma: T,
    conv: ExpansionConvention,
) -> Result<GapOptimum<T>> {
    if !(ell > T::zero()) || !ell.is_finite() {
        return Err(Error::invalid(format!(
            "separation must be positive, got {ell}"
        )));
    }
    let d = gap_derivatives(T::c(0.5) * ell, ell)?;
    let base = Stationarity::new(&d, T::zero(), T::zero(), conv);
    let e0 = base.root()?;
    let dq_de = base.slope(e0);
    if dq_de == T::zero() {
        return Err(Error::Expansion(
            "double root; sensitivities undefined".into(),
        ));
    }
    let mass_weight = match conv {
        ExpansionConvention::Standard => T::one(),
        ExpansionConvention::Consistent => T::c(0.5),
    };
    let b_of_ell = -mass_weight * base.eval(&d.d2_mu, e0) / dq_de;
    let a_of_ell = -base.eval(&d.s, e0) / dq_de;
    let epsilon = Stationarity::new(&d, mu, sigma, conv).root()?;
    Ok(GapOptimum {
        omega_max: T::c(0.5) * ell + epsilon,
        epsilon,
        e_of_ell: e0,
        a_of_ell,
        b_of_ell,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::{d2n_dmu2_at0, n_plus_massless, sigma2_corrections};

    /// First three derivatives by five-point central stencils.
    fn stencil(f: impl Fn(f64) -> f64, x: f64, h: f64) -> [f64; 3] {
        let [m2, m1, p1, p2] = [-2.0, -1.0, 1.0, 2.0].map(|k| f(x + k * h));
        let f0 = f(x);
        [
            (m2 - 8.0 * m1 + 8.0 * p1 - p2) / (12.0 * h),
            (-m2 + 16.0 * m1 - 30.0 * f0 + 16.0 * p1 - p2) / (12.0 * h * h),
            (-m2 + 2.0 * m1 - 2.0 * p1 + p2) / (2.0 * h * h * h),
        ]
    }

    fn close(a: [f64; 3], b: [f64; 3], tol: [f64; 3]) {
        for k in 0..3 {
            let scale = a[k].abs().max(b[k].abs());
            assert!(
                (a[k] - b[k]).abs() <= tol[k] * scale,
                "order {}: {} vs {}",
                k + 1,
                a[k],
                b[k]
            );
        }
    }

    #[test]
    fn derivatives_match_finite_differences() {
        for (w, l) in [(2.5, 5.0), (3.5, 7.0), (1.7, 4.0), (5.0, 10.0)] {
            let d = gap_derivatives(w, l).unwrap();
            let tol = [1e-6, 1e-5, 1e-3];
            close(d.n0, stencil(|x| n_plus_massless(x, l), w, 1e-3), tol);
            close(
                d.d2_mu,
                stencil(|x| d2n_dmu2_at0(x, l).unwrap(), w, 1e-3),
                tol,
            );
            close(
                d.s,
                stencil(|x| sigma2_corrections(x, l).unwrap().0, w, 1e-3),
                tol,
            );
        }
    }

    #[test]
    fn standard_root_is_nearest_zero() {
        let g = epsilon_solve(5.0, 0.0, 0.0, ExpansionConvention::Standard).unwrap();
        assert!(g.epsilon < 0.0 && g.epsilon > -0.5);
        assert_eq!(g.epsilon, g.e_of_ell);
    }
}
