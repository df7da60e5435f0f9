use super::search::maximize_over_omega;
use crate::error::Result;
use crate::harvest::{compute_l, compute_m, density_matrix, negativity, Detector, HarvestParams};
use crate::quadrature::QuadSpec;
use crate::real::Real;

/// Step of the Richardson-extrapolated central difference in `mu`.
pub const MASS_STEP: f64 = 1e-3;

/// One point of the mass-derivative curves, taken at the negativity-maximizing gap.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivativeRow<T> {
    pub mu: T,
    pub omega_max: T,
    pub l: T,
    pub abs_m: T,
    pub dl_dmu: T,
    pub dabs_m_dmu: T,
    pub negativity: T,
}

fn richardson<T: Real, F: FnMut(T) -> Result<T>>(mut f: F, x: T, h: T) -> Result<T> {
    // Both observables are even in mu, so reflect steps that cross zero.
    let mut central =
        |h: T| -> Result<T> { Ok((f((x + h).abs())? - f((x - h).abs())?) / (T::c(2.0) * h)) };
    let d1 = central(h)?;
    let d2 = central(T::c(0.5) * h)?;
    Ok((T::c(4.0) * d2 - d1) / T::c(3.0))
}

/// `dL/dmu` and `d|M|/dmu` along the curve of maximal negativity.
///
/// The gap is held at its optimum while differentiating: since the negativity
/// is stationary in the gap there, the partial derivatives govern how the
/// maximum moves. Masses without entanglement are skipped.
pub fn derivative_curves<T: Real>(
    p: &HarvestParams<T>,
    q: &QuadSpec<T>,
    masses: &[T],
    omega_tol: T,
) -> Result<Vec<DerivativeRow<T>>> {
    let h = T::c(MASS_STEP);
    let mut rows = Vec::with_capacity(masses.len());
    for &mu in masses {
        let pm = p.with_mass(mu);
        let Some(opt) = maximize_over_omega(&pm, q, omega_tol)? else {
            continue;
        };
        let at = pm.with_gap(opt.arg_max);
        let l_of = |m: T| compute_l(&at.with_mass(m), q, Detector::A).map(|e| e.value);
        let m_of = |m: T| compute_m(&at.with_mass(m), q).map(|(z, _)| z.norm());
        let s = density_matrix(&at, q)?.state;
        rows.push(DerivativeRow {
            mu,
            omega_max: opt.arg_max,
            l: s.l_aa,
            abs_m: s.m.norm(),
            dl_dmu: richardson(l_of, mu, h)?,
            dabs_m_dmu: richardson(m_of, mu, h)?,
            negativity: negativity(&s),
        });
    }
    Ok(rows)
}

/// First mass at which `d|M|/dmu - dL/dmu` changes sign, by linear
/// interpolation. Both derivatives vanish at `mu = 0`, which does not count.
pub fn derivative_crossing<T: Real>(rows: &[DerivativeRow<T>]) -> Option<T> {
    let gaps: Vec<(T, T)> = rows
        .iter()
        .map(|r| (r.mu, r.dabs_m_dmu - r.dl_dmu))
        .filter(|&(_, g)| g != T::zero())
        .collect();
    gaps.windows(2).find_map(|w| {
        let ((m0, g0), (m1, g1)) = (w[0], w[1]);
        (g0 * g1 < T::zero()).then(|| m0 + (m1 - m0) * g0 / (g0 - g1))
    })
}
