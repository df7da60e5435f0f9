use super::{integrate, QuadResult, QuadSpec};
use crate::error::{Error, Result};
use crate::real::Real;

const MAX_CYCLES: usize = 4000;
const WYNN_WINDOW: usize = 60;

/// Wynn's epsilon algorithm on a sequence of partial sums.
///
/// Returns the highest even-column entry of the table together with a crude
/// error estimate (distance to the neighbouring even-column entries).
pub fn wynn_epsilon<T: Real>(sums: &[T]) -> (T, T) {
    let n = sums.len();
    match n {
        0 => return (T::zero(), T::infinity()),
        1 => return (sums[0], T::infinity()),
        2 => return (sums[1], (sums[1] - sums[0]).abs()),
        _ => {}
    }
    let mut prev = vec![T::zero(); n + 1];
    let mut curr: Vec<T> = sums.to_vec();
    let mut best = sums[n - 1];
    let mut best_err = (sums[n - 1] - sums[n - 2]).abs();
    let mut k = 0usize;
    while curr.len() > 1 {
        let mut next = Vec::with_capacity(curr.len() - 1);
        for j in 0..curr.len() - 1 {
            let diff = curr[j + 1] - curr[j];
            let v = if diff == T::zero() {
                T::infinity()
            } else {
                prev[j + 1] + diff.recip()
            };
            next.push(v);
        }
        k += 1;
        if next.iter().any(|v| !v.is_finite()) {
            break;
        }
        if k % 2 == 0 {
            let m = next.len();
            let cand = next[m - 1];
            let err = if m >= 2 {
                (next[m - 1] - next[m - 2]).abs()
                    + if m >= 3 {
                        (next[m - 1] - next[m - 3]).abs()
                    } else {
                        T::zero()
                    }
            } else {
                (cand - best).abs()
            };
            if err <= best_err {
                best = cand;
                best_err = err;
            }
        }
        prev = curr;
        curr = next;
    }
    (best, best_err)
}

/// `int_0^inf g(x) sin(freq x) dx` for an amplitude `g` that decays at least
/// like `1/x`, by integrating over half-periods and extrapolating the partial
/// sums (the QAWF strategy). Fast-decaying tails stop as soon as successive
/// half-period contributions fall below tolerance.
pub fn integrate_fourier_sine<T: Real, G: FnMut(T) -> T>(
    mut g: G,
    freq: T,
    spec: &QuadSpec<T>,
) -> Result<QuadResult<T>> {
    spec.validate()?;
    if !(freq > T::zero()) {
        return Err(Error::invalid("sine frequency must be positive"));
    }
    let half = T::PI() / freq;
    let cycle_spec = QuadSpec {
        rel_tol: spec.rel_tol * T::c(0.1),
        abs_tol: spec.abs_tol * T::c(0.01),
        oscillation_period: None,
        ..*spec
    };
    let mut sums: Vec<T> = Vec::new();
    let mut total = T::zero();
    let mut cycle_err = T::zero();
    let mut evaluations = 0usize;
    let mut quiet = 0usize;
    let mut history: Vec<T> = Vec::new();
    let mut last_err = T::infinity();
    for k in 0..MAX_CYCLES {
        let a = half * T::from_usize_lossy(k);
        let b = a + half;
        let piece = integrate(|x| g(x) * (freq * x).sin(), a, b, &cycle_spec)?;
        evaluations += piece.evaluations;
        total = total + piece.value;
        cycle_err = cycle_err + piece.error_estimate;
        sums.push(total);

        let target = spec.target(total);
        if piece.value.abs() <= target * T::c(1e-3) {
            quiet += 1;
        } else {
            quiet = 0;
        }
        if quiet >= 3 && k >= 4 {
            return Ok(QuadResult {
                value: total,
                error_estimate: cycle_err + piece.value.abs() * T::c(3.0),
                evaluations,
            });
        }
        if sums.len() >= 8 {
            let start = sums.len().saturating_sub(WYNN_WINDOW);
            let (est, est_err) = wynn_epsilon(&sums[start..]);
            history.push(est);
            let h = history.len();
            if h >= 3 {
                let drift = (history[h - 1] - history[h - 2])
                    .abs()
                    .max((history[h - 1] - history[h - 3]).abs());
                let err = drift.max(est_err.min(drift * T::c(10.0))) + cycle_err;
                last_err = err;
                if err <= target && k >= 12 {
                    return Ok(QuadResult {
                        value: est,
                        error_estimate: err,
                        evaluations,
                    });
                }
            }
        }
    }
    let value = *history.last().unwrap_or(&total);
    Err(QuadResult {
        value,
        error_estimate: last_err.min((value - total).abs() + cycle_err),
        evaluations,
    }
    .accuracy_error("sine tail did not settle"))
}
