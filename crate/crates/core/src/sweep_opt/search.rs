use super::brent::{maximize, OptResult};
use crate::error::{Error, Result};
use crate::harvest::{density_matrix, negativity_margin, HarvestParams};
use crate::quadrature::QuadSpec;
use crate::real::Real;

/// Points of the coarse scan that precedes every Brent refinement.
pub const SCAN_POINTS: usize = 25;

/// Lower end of the gap bracket; the upper end is the separation.
pub const OMEGA_MIN: f64 = 0.1;

/// `sqrt(|M|^2 + (L_AA-L_BB)^2/4) - (L_AA+L_BB)/2` without clipping at zero, so
/// the optimizers see a smooth objective below threshold.
pub fn margin<T: Real>(p: &HarvestParams<T>, q: &QuadSpec<T>) -> Result<T> {
    Ok(negativity_margin(&density_matrix(p, q)?.state))
}

/// Maximizes the negativity over the mean gap on `[0.1, l]`. `None` when the
/// negativity vanishes across the whole bracket.
pub fn maximize_over_omega<T: Real>(
    p: &HarvestParams<T>,
    q: &QuadSpec<T>,
    tol: T,
) -> Result<Option<OptResult<T>>> {
    p.validate()?;
    let lo = T::c(OMEGA_MIN);
    let hi = p.separation.max(lo + T::one());
    let r = maximize(|w| margin(&p.with_gap(w), q), lo, hi, tol, SCAN_POINTS)?;
    Ok((r.max_value > T::zero()).then_some(r))
}

/// How the gap is set while the mass is scanned.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GapChoice<T> {
    /// Use the gap already in the parameters.
    Fixed,
    /// Re-optimize the gap at every mass, to this tolerance.
    Optimized(T),
}

/// Result of a mass scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MassOptimum<T> {
    pub result: OptResult<T>,
    /// Whether the maximum lies inside the mass range rather than at `mu = 0`.
    pub interior: bool,
    /// Gap used at the maximizing mass.
    pub omega: T,
}

/// Maximizes the negativity over the mass on `[0, mu_hi]`. `None` when the
/// negativity vanishes for every mass.
pub fn maximize_over_mu<T: Real>(
    p: &HarvestParams<T>,
    q: &QuadSpec<T>,
    tol: T,
    mu_hi: T,
    gap: GapChoice<T>,
) -> Result<Option<MassOptimum<T>>> {
    p.validate()?;
    if !(mu_hi > T::zero()) {
        return Err(Error::invalid(format!(
            "upper mass must be positive, got {mu_hi}"
        )));
    }
    let objective = |mu: T| -> Result<(T, T)> {
        let pm = p.with_mass(mu);
        match gap {
            GapChoice::Fixed => Ok((margin(&pm, q)?, pm.gap_mean)),
            GapChoice::Optimized(gtol) => {
                let lo = T::c(OMEGA_MIN);
                let hi = pm.separation.max(lo + T::one());
                let r = maximize(|w| margin(&pm.with_gap(w), q), lo, hi, gtol, SCAN_POINTS)?;
                Ok((r.max_value, r.arg_max))
            }
        }
    };
    let r = maximize(
        |mu| objective(mu).map(|v| v.0),
        T::zero(),
        mu_hi,
        tol,
        SCAN_POINTS,
    )?;
    if !(r.max_value > T::zero()) {
        return Ok(None);
    }
    let omega = objective(r.arg_max)?.1;
    Ok(Some(MassOptimum {
        result: r,
        interior: r.arg_max > tol,
        omega,
    }))
}

/// Smallest gap on `[0.1, l]` at which the negativity turns on, to within `tol`.
/// `None` when there is no rising edge in the bracket.
pub fn threshold_omega<T: Real>(
    p: &HarvestParams<T>,
    q: &QuadSpec<T>,
    tol: T,
) -> Result<Option<T>> {
    p.validate()?;
    let lo = T::c(OMEGA_MIN);
    let hi = p.separation.max(lo + T::one());
    let n = 4 * SCAN_POINTS;
    let step = (hi - lo) / T::from_usize_lossy(n - 1);
    let mut prev = (lo, margin(&p.with_gap(lo), q)?);
    if prev.1 > T::zero() {
        return Ok(None);
    }
    for i in 1..n {
        let w = lo + step * T::from_usize_lossy(i);
        let m = margin(&p.with_gap(w), q)?;
        if m > T::zero() {
            let (mut a, mut b) = (prev.0, w);
            while b - a > tol {
                let mid = T::c(0.5) * (a + b);
                if margin(&p.with_gap(mid), q)? > T::zero() {
                    b = mid;
                } else {
                    a = mid;
                }
            }
            return Ok(Some(T::c(0.5) * (a + b)));
        }
        prev = (w, m);
    }
    Ok(None)
}
