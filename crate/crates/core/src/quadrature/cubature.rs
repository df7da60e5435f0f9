use std::cell::RefCell;

use super::{integrate, QuadResult, QuadSpec};
use crate::error::{Error, Result};
use crate::real::Real;

/// Nested adaptive Gauss-Kronrod over the rectangle `[x0, x1] x [y0, y1]`.
///
/// The inner integrals run at a tenth of the outer tolerance; their error
/// estimates are added to the outer one, weighted by the outer width.
pub fn integrate_2d<T: Real, F: FnMut(T, T) -> T>(
    mut f: F,
    (x0, x1): (T, T),
    (y0, y1): (T, T),
    spec: &QuadSpec<T>,
) -> Result<QuadResult<T>> {
    spec.validate()?;
    let inner_spec = QuadSpec {
        rel_tol: spec.rel_tol * T::c(0.1),
        abs_tol: spec.abs_tol * T::c(0.1) / ((x1 - x0).abs().max(T::epsilon())),
        oscillation_period: spec.oscillation_period,
        ..*spec
    };
    let outer_spec = QuadSpec {
        oscillation_period: spec.oscillation_period,
        ..*spec
    };
    let failure: RefCell<Option<Error>> = RefCell::new(None);
    let mut inner_evals = 0usize;
    let mut inner_err_max = T::zero();
    let outer = integrate(
        |x| {
            if failure.borrow().is_some() {
                return T::zero();
            }
            match integrate(|y| f(x, y), y0, y1, &inner_spec) {
                Ok(r) => {
                    inner_evals += r.evaluations;
                    inner_err_max = inner_err_max.max(r.error_estimate);
                    r.value
                }
                Err(e) => {
                    *failure.borrow_mut() = Some(e);
                    T::zero()
                }
            }
        },
        x0,
        x1,
        &outer_spec,
    );
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    let outer = outer?;
    Ok(QuadResult {
        value: outer.value,
        error_estimate: outer.error_estimate + inner_err_max * (x1 - x0).abs(),
        evaluations: inner_evals,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn separable_gaussian() {
        let spec = QuadSpec::new(1e-11, 1e-16).unwrap();
        let r = integrate_2d(
            |x: f64, y: f64| (-(x * x + 2.0 * y * y)).exp(),
            (-8.0, 8.0),
            (-8.0, 8.0),
            &spec,
        )
        .unwrap();
        let pi = std::f64::consts::PI;
        assert_relative_eq!(r.value, pi / 2.0_f64.sqrt(), max_relative = 1e-10);
    }

    #[test]
    fn non_separable_polynomial() {
        let spec = QuadSpec::new(1e-12, 0.0).unwrap();
        let r = integrate_2d(
            |x: f64, y: f64| x * x * y + x * y * y * y,
            (0.0, 1.0),
            (0.0, 2.0),
            &spec,
        )
        .unwrap();
        // int x^2 y = 1/3 * 2, int x y^3 = 1/2 * 4
        assert_relative_eq!(r.value, 2.0 / 3.0 + 2.0, max_relative = 1e-13);
    }
}
