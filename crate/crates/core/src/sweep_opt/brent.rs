use crate::error::{Error, Result};
use crate::real::Real;

const MAX_ITERATIONS: usize = 200;

/// A bracketed root.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root<T> {
    pub x: T,
    pub residual: T,
    pub iterations: usize,
}

/// Brent's root finder (bisection, secant and inverse quadratic steps) on `[lo, hi]`.
pub fn brent_root<T: Real, F: FnMut(T) -> T>(mut f: F, lo: T, hi: T, xtol: T) -> Result<Root<T>> {
    let (mut a, mut b) = (lo, hi);
    let (mut fa, mut fb) = (f(a), f(b));
    if fa == T::zero() {
        return Ok(Root {
            x: a,
            residual: fa,
            iterations: 0,
        });
    }
    if fb == T::zero() {
        return Ok(Root {
            x: b,
            residual: fb,
            iterations: 0,
        });
    }
    if !(fa.signum() != fb.signum()) || !fa.is_finite() || !fb.is_finite() {
        return Err(Error::Bracket {
            lo: lo.as_f64(),
            hi: hi.as_f64(),
            f_lo: fa.as_f64(),
            f_hi: fb.as_f64(),
        });
    }
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;
    let two = T::c(2.0);
    for it in 1..=MAX_ITERATIONS {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol = two * T::epsilon() * b.abs() + T::c(0.5) * xtol;
        let m = T::c(0.5) * (c - b);
        if m.abs() <= tol || fb == T::zero() {
            return Ok(Root {
                x: b,
                residual: fb,
                iterations: it,
            });
        }
        if e.abs() >= tol && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q) = if a == c {
                (two * m * s, T::one() - s)
            } else {
                let q = fa / fc;
                let r = fb / fc;
                (
                    s * (two * m * q * (q - r) - (b - a) * (r - T::one())),
                    (q - T::one()) * (r - T::one()) * (s - T::one()),
                )
            };
            if p > T::zero() {
                q = -q;
            } else {
                p = -p;
            }
            if two * p < (T::c(3.0) * m * q - (tol * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b = if d.abs() > tol {
            b + d
        } else {
            b + tol * m.signum()
        };
        fb = f(b);
    }
    Ok(Root {
        x: b,
        residual: fb,
        iterations: MAX_ITERATIONS,
    })
}

/// Outcome of a one-dimensional maximization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptResult<T> {
    pub arg_max: T,
    pub max_value: T,
    /// Final bracket around `arg_max`.
    pub bracket: (T, T),
    pub iterations: usize,
    pub converged: bool,
}

/// Maximizes `f` on `[lo, hi]`: a uniform scan of `scan` points picks the
/// best cell, then Brent's parabolic/golden-section search refines it until
/// the bracket is no wider than `tol`.
pub fn maximize<T: Real, F: FnMut(T) -> Result<T>>(
    mut f: F,
    lo: T,
    hi: T,
    tol: T,
    scan: usize,
) -> Result<OptResult<T>> {
    if !(lo < hi) || !(tol > T::zero()) {
        return Err(Error::invalid(format!(
            "need lo < hi and tol > 0 (got [{lo}, {hi}], tol {tol})"
        )));
    }
    let n = scan.max(3);
    let step = (hi - lo) / T::from_usize_lossy(n - 1);
    let node = |i: usize| {
        if i + 1 == n {
            hi
        } else {
            lo + step * T::from_usize_lossy(i)
        }
    };
    let mut best = (0usize, T::neg_infinity());
    for i in 0..n {
        let v = f(node(i))?;
        if v > best.1 {
            best = (i, v);
        }
    }
    let a = node(best.0.saturating_sub(1));
    let b = node((best.0 + 1).min(n - 1));
    let mut r = golden_brent(|x| f(x).map(|v| -v), a, b, node(best.0), -best.1, tol)?;
    r.max_value = -r.max_value;
    r.iterations += n;
    Ok(r)
}

/// Brent's minimizer on `[a, b]` started from the interior point `x`.
fn golden_brent<T: Real, F: FnMut(T) -> Result<T>>(
    mut f: F,
    a: T,
    b: T,
    x0: T,
    f0: T,
    tol: T,
) -> Result<OptResult<T>> {
    let golden = T::c(0.381_966_011_250_105_1);
    let (mut a, mut b) = (a, b);
    let (mut x, mut w, mut v) = (x0, x0, x0);
    let (mut fx, mut fw, mut fv) = (f0, f0, f0);
    let mut d = T::zero();
    let mut e = T::zero();
    let tol1 = T::c(0.25) * tol;
    for it in 1..=MAX_ITERATIONS {
        let m = T::c(0.5) * (a + b);
        let tol_here = tol1 + T::epsilon() * x.abs();
        let tol2 = T::c(2.0) * tol_here;
        if (x - m).abs() <= tol2 - T::c(0.5) * (b - a) {
            return Ok(OptResult {
                arg_max: x,
                max_value: fx,
                bracket: (a, b),
                iterations: it,
                converged: true,
            });
        }
        let mut golden_step = true;
        if e.abs() > tol_here {
            let r = (x - w) * (fx - fv);
            let mut q = (x - v) * (fx - fw);
            let mut p = (x - v) * q - (x - w) * r;
            q = T::c(2.0) * (q - r);
            if q > T::zero() {
                p = -p;
            } else {
                q = -q;
            }
            if p.abs() < (T::c(0.5) * q * e).abs() && p > q * (a - x) && p < q * (b - x) {
                e = d;
                d = p / q;
                let u = x + d;
                if u - a < tol2 || b - u < tol2 {
                    d = if x < m { tol_here } else { -tol_here };
                }
                golden_step = false;
            }
        }
        if golden_step {
            e = if x < m { b - x } else { a - x };
            d = golden * e;
        }
        let u = if d.abs() >= tol_here {
            x + d
        } else {
            x + tol_here * d.signum()
        };
        let fu = f(u)?;
        if fu <= fx {
            if u < x {
                b = x;
            } else {
                a = x;
            }
            v = w;
            fv = fw;
            w = x;
            fw = fx;
            x = u;
            fx = fu;
        } else {
            if u < x {
                a = u;
            } else {
                b = u;
            }
            if fu <= fw || w == x {
                v = w;
                fv = fw;
                w = u;
                fw = fu;
            } else if fu <= fv || v == x || v == w {
                v = u;
                fv = fu;
            }
        }
    }
    Ok(OptResult {
        arg_max: x,
        max_value: fx,
        bracket: (a, b),
        iterations: MAX_ITERATIONS,
        converged: false,
    })
}
