use crate::error::{Error, Result};
use crate::real::Real;

/// Stopping rule for power series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Accuracy<T> {
    rel_tol: T,
    max_terms: usize,
}

impl<T: Real> Accuracy<T> {
    /// `rel_tol` must lie in `(0, 1e-3]`, `max_terms` must be positive.
    pub fn new(rel_tol: T, max_terms: usize) -> Result<Self> {
        if !(rel_tol > T::zero() && rel_tol <= T::c(1e-3)) {
            return Err(Error::invalid(format!(
                "series rel_tol {} outside (0, 1e-3]",
                rel_tol
            )));
        }
        if max_terms == 0 {
            return Err(Error::invalid("series max_terms must be positive"));
        }
        Ok(Self { rel_tol, max_terms })
    }

    pub fn rel_tol(&self) -> T {
        self.rel_tol
    }

    pub fn max_terms(&self) -> usize {
        self.max_terms
    }
}

impl<T: Real> Default for Accuracy<T> {
    fn default() -> Self {
        Self {
            rel_tol: (T::epsilon() * T::c(64.0)).max(T::c(1e-14)),
            max_terms: 5000,
        }
    }
}

fn is_nonpositive_integer<T: Real>(b: T) -> bool {
    b <= T::zero() && b == b.round()
}

/// Generalized hypergeometric series `2F2(a1, a2; b1, b2; z)`.
///
/// Terminates once the remaining tail is certified below `rel_tol * |sum|`:
/// beyond the index where the term ratio is decreasing and below one, the
/// tail is bounded by a geometric series. Also fails when the alternating
/// series has cancelled more digits than the tolerance allows.
pub fn hyp2f2<T: Real>(a1: T, a2: T, b1: T, b2: T, z: T, acc: &Accuracy<T>) -> Result<T> {
    if is_nonpositive_integer(b1) || is_nonpositive_integer(b2) {
        return Err(Error::domain(
            "hyp2f2",
            format!(
                "lower parameters must not be non-positive integers (b1 = {}, b2 = {})",
                b1, b2
            ),
        ));
    }
    if !z.is_finite() {
        return Err(Error::domain("hyp2f2", "non-finite argument"));
    }
    let ratio_at =
        |k: T| -> T { ((a1 + k) * (a2 + k) * z / ((b1 + k) * (b2 + k) * (k + T::one()))).abs() };
    let params_max = a1.abs().max(a2.abs()).max(b1.abs()).max(b2.abs());
    let k_monotone = params_max.ceil() + T::one();

    let mut term = T::one();
    let mut sum = T::one();
    let mut biggest = T::one();
    let mut tail = T::infinity();
    for k in 0..acc.max_terms {
        let fk = T::from_usize_lossy(k);
        term = term * (a1 + fk) * (a2 + fk) * z / ((b1 + fk) * (b2 + fk) * (fk + T::one()));
        sum = sum + term;
        biggest = biggest.max(term.abs());
        if term == T::zero() {
            tail = T::zero();
            break;
        }
        let next = fk + T::one();
        let r = ratio_at(next);
        if next >= k_monotone && r < T::one() {
            tail = term.abs() * r / (T::one() - r);
            if tail <= acc.rel_tol * sum.abs() {
                break;
            }
        }
    }
    if !(tail <= acc.rel_tol * sum.abs()) {
        return Err(Error::Convergence {
            func: "hyp2f2",
            terms: acc.max_terms,
            partial_sum: sum.as_f64(),
            tail_bound: tail.as_f64(),
        });
    }
    let rounding = biggest * T::epsilon();
    if rounding > acc.rel_tol * sum.abs() {
        return Err(Error::Convergence {
            func: "hyp2f2 (cancellation)",
            terms: acc.max_terms,
            partial_sum: sum.as_f64(),
            tail_bound: rounding.as_f64(),
        });
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn reference_values() {
        let acc = Accuracy::default();
        // mpmath hyp2f2 at 30 digits
        assert_relative_eq!(
            hyp2f2(1.0, 1.0, 2.0, 1.5, 2.0_f64, &acc).unwrap(),
            2.250_801_208_114_537_3,
            max_relative = 1e-14
        );
        assert_relative_eq!(
            hyp2f2(1.0, 1.0, 2.0, 2.5, -4.0_f64, &acc).unwrap(),
            0.557_283_453_114_171_9,
            max_relative = 1e-13
        );
        assert_relative_eq!(
            hyp2f2(0.5, 1.5, 2.5, 3.0, 0.3_f64, &acc).unwrap(),
            1.031_253_966_494_583_8,
            max_relative = 1e-14
        );
    }

    #[test]
    fn terminating_series() {
        // a1 = -2: polynomial 1 + (-2)(1)z/(1*1*1) + (-2)(-1)(1)(2)z^2/(1*2*1*2*2)
        let acc = Accuracy::default();
        let z = 0.7_f64;
        let exact = 1.0 - 2.0 * z + 0.5 * z * z;
        assert_relative_eq!(
            hyp2f2(-2.0, 1.0, 1.0, 1.0, z, &acc).unwrap(),
            exact,
            max_relative = 1e-15
        );
    }

    #[test]
    fn reports_nonconvergence_with_partial_sum() {
        let acc = Accuracy::new(1e-14, 5).unwrap();
        match hyp2f2(1.0, 1.0, 2.0, 1.5, 9.0_f64, &acc) {
            Err(Error::Convergence {
                partial_sum,
                tail_bound,
                ..
            }) => {
                assert!(partial_sum > 1.0);
                assert!(tail_bound > 0.0);
            }
            other => panic!("expected convergence error, got {:?}", other),
        }
    }

    #[test]
    fn reports_cancellation() {
        let acc = Accuracy::default();
        assert!(matches!(
            hyp2f2(1.0, 1.0, 2.0, 2.5, -144.0_f64, &acc),
            Err(Error::Convergence { .. })
        ));
    }

    #[test]
    fn rejects_pole_parameters() {
        let acc = Accuracy::default();
        assert!(matches!(
            hyp2f2(1.0, 1.0, -1.0, 2.0, 0.5_f64, &acc),
            Err(Error::Domain { .. })
        ));
        assert!(Accuracy::new(0.0_f64, 10).is_err());
        assert!(Accuracy::new(1e-2_f64, 10).is_err());
    }
}
