use nalgebra::{Complex as NaComplex, Matrix4};
use num_complex::Complex;

use super::elements::{compute_l, compute_l_cross, im_m, re_m, Estimate};
use super::params::{Detector, HarvestParams};
use crate::error::{Error, Result};
use crate::quadrature::QuadSpec;
use crate::real::Real;

/// Largest `L_AA + L_BB` accepted before the second-order state is rejected.
pub const PERTURBATIVE_LIMIT: f64 = 0.1;

/// The five independent second-order matrix elements.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoDetectorState<T> {
    pub l_aa: T,
    pub l_bb: T,
    pub l_ab: Complex<T>,
    pub m: Complex<T>,
}

impl<T: Real> TwoDetectorState<T> {
    pub fn vacuum() -> Self {
        Self {
            l_aa: T::zero(),
            l_bb: T::zero(),
            l_ab: Complex::new(T::zero(), T::zero()),
            m: Complex::new(T::zero(), T::zero()),
        }
    }

    /// Density matrix in the basis `{gg, ge, eg, ee}`.
    pub fn matrix(&self) -> [[Complex<T>; 4]; 4] {
        let z = Complex::new(T::zero(), T::zero());
        let r = |x: T| Complex::new(x, T::zero());
        [
            [r(T::one() - self.l_aa - self.l_bb), z, z, self.m.conj()],
            [z, r(self.l_bb), self.l_ab.conj(), z],
            [z, self.l_ab, r(self.l_aa), z],
            [self.m, z, z, z],
        ]
    }

    /// Multiplies every element by `s` (the `lambda^2` rescaling).
    pub fn scaled(&self, s: T) -> Self {
        Self {
            l_aa: self.l_aa * s,
            l_bb: self.l_bb * s,
            l_ab: self.l_ab * s,
            m: self.m * s,
        }
    }
}

/// Matrix elements with the error bound of each quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateEstimate<T> {
    pub state: TwoDetectorState<T>,
    pub l_aa_err: T,
    pub l_bb_err: T,
    pub l_ab_err: T,
    pub re_m: Estimate<T>,
    pub im_m: Estimate<T>,
}

/// Evaluates all matrix elements and applies the perturbative-validity guard.
pub fn density_matrix<T: Real>(p: &HarvestParams<T>, q: &QuadSpec<T>) -> Result<StateEstimate<T>> {
    p.validate()?;
    let l_aa = compute_l(p, q, Detector::A)?;
    let l_bb = if p.equal_gaps() {
        l_aa
    } else {
        compute_l(p, q, Detector::B)?
    };
    let sum = l_aa.value + l_bb.value;
    if sum > T::c(PERTURBATIVE_LIMIT) {
        return Err(Error::Regime {
            sum: sum.as_f64(),
            limit: PERTURBATIVE_LIMIT,
        });
    }
    let (l_ab, l_ab_err) = compute_l_cross(p, q)?;
    let re = re_m(p, q)?;
    let im = im_m(p, q)?;
    Ok(StateEstimate {
        state: TwoDetectorState {
            l_aa: l_aa.value,
            l_bb: l_bb.value,
            l_ab,
            m: Complex::new(re.value, im.value),
        },
        l_aa_err: l_aa.error,
        l_bb_err: l_bb.error,
        l_ab_err,
        re_m: re,
        im_m: im,
    })
}

/// Unclipped negativity margin `sqrt(|M|^2 + (L_AA-L_BB)^2/4) - (L_AA+L_BB)/2`.
pub fn negativity_margin<T: Real>(s: &TwoDetectorState<T>) -> T {
    let d = T::c(0.5) * (s.l_aa - s.l_bb);
    (s.m.norm_sqr() + d * d).sqrt() - T::c(0.5) * (s.l_aa + s.l_bb)
}

/// Negativity of the second-order state.
pub fn negativity<T: Real>(s: &TwoDetectorState<T>) -> T {
    negativity_margin(s).max(T::zero())
}

/// Sum of the magnitudes of the negative eigenvalues of the partial transpose,
/// by dense Hermitian diagonalization (computed in double precision).
pub fn negativity_eigen_oracle<T: Real>(s: &TwoDetectorState<T>) -> T {
    let m = s.matrix();
    let pt = Matrix4::<NaComplex<f64>>::from_fn(|i, j| {
        // partial transpose on B: swap the B indices of row and column
        let (ai, bi) = (i / 2, i % 2);
        let (aj, bj) = (j / 2, j % 2);
        let e = m[2 * ai + bj][2 * aj + bi];
        NaComplex::new(e.re.as_f64(), e.im.as_f64())
    });
    let eig = pt.symmetric_eigenvalues();
    let neg: f64 = eig.iter().filter(|&&v| v < 0.0).map(|v| -v).sum();
    T::c(neg)
}

/// Negativity decomposed into its harvested and signalling parts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NegativityBreakdown<T> {
    pub negativity: T,
    pub n_plus: T,
    pub re_m: T,
    pub im_m: T,
    pub l_local: T,
    /// `|N - max(0, N+)| / N`; `None` where the negativity vanishes.
    pub signalling_fraction: Option<T>,
}

impl<T: Real> NegativityBreakdown<T> {
    pub fn from_state(s: &TwoDetectorState<T>) -> Self {
        let neg = negativity(s);
        let d = T::c(0.5) * (s.l_aa - s.l_bb);
        let mean = T::c(0.5) * (s.l_aa + s.l_bb);
        let n_plus = (s.m.re * s.m.re + d * d).sqrt() - mean;
        Self {
            negativity: neg,
            n_plus,
            re_m: s.m.re,
            im_m: s.m.im,
            l_local: mean,
            signalling_fraction: fraction(neg, n_plus),
        }
    }
}

fn fraction<T: Real>(neg: T, n_plus: T) -> Option<T> {
    if neg > T::zero() {
        Some((neg - n_plus.max(T::zero())).abs() / neg)
    } else {
        None
    }
}

/// Full breakdown at `p`.
pub fn breakdown<T: Real>(p: &HarvestParams<T>, q: &QuadSpec<T>) -> Result<NegativityBreakdown<T>> {
    Ok(NegativityBreakdown::from_state(
        &density_matrix(p, q)?.state,
    ))
}

/// Relative weight of the signalling (commutator) contribution to the negativity.
pub fn signalling_fraction<T: Real>(p: &HarvestParams<T>, q: &QuadSpec<T>) -> Result<Option<T>> {
    Ok(breakdown(p, q)?.signalling_fraction)
}
