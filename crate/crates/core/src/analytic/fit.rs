//! Fits of the gap-offset curves to their closed-form models:
//! `E = a1/l`, `A = b1/l^c1 + a2` (size), `B = b2 l + a3` (mass).

use nalgebra::{DMatrix, DVector};

use super::gap::{epsilon_solve, ExpansionConvention};
use crate::error::{Error, Result};

const MAX_ITERATIONS: usize = 500;
const GRADIENT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct FitConstants {
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
    pub b1: f64,
    pub b2: f64,
    pub c1: f64,
}

impl FitConstants {
    /// Reference constants used as the starting point of every fit.
    pub const REFERENCE: FitConstants = FitConstants {
        a1: -1.39218,
        a2: -0.0230021,
        a3: 0.377855,
        b1: -0.987746,
        b2: -0.226636,
        c1: 1.25143,
    };

    pub fn as_array(&self) -> [(&'static str, f64); 6] {
        [
            ("a1", self.a1),
            ("a2", self.a2),
            ("a3", self.a3),
            ("b1", self.b1),
            ("b2", self.b2),
            ("c1", self.c1),
        ]
    }

    pub fn e_model(&self, ell: f64) -> f64 {
        self.a1 / ell
    }

    pub fn a_model(&self, ell: f64) -> f64 {
        self.b1 / ell.powf(self.c1) + self.a2
    }

    pub fn b_model(&self, ell: f64) -> f64 {
        self.b2 * ell + self.a3
    }
}

/// Fitted constants, the data they were fitted to, and fit diagnostics.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct FitReport {
    pub constants: FitConstants,
    pub ell: Vec<f64>,
    pub e_curve: Vec<f64>,
    pub a_curve: Vec<f64>,
    pub b_curve: Vec<f64>,
    /// Mean relative deviation of each fitted curve: `[E, A, B]`.
    pub l1_relative: [f64; 3],
    pub iterations: [usize; 3],
    pub gradient_norm: [f64; 3],
}

struct LmOutcome {
    params: Vec<f64>,
    iterations: usize,
    gradient_norm: f64,
}

/// Levenberg-Marquardt on relative residuals `(model - y) / |y|`, stopping
/// once the gradient of the half sum of squares is below `GRADIENT_TOL`.
fn levenberg_marquardt<M, J>(
    model: M,
    jacobian: J,
    x: &[f64],
    y: &[f64],
    start: &[f64],
) -> Result<LmOutcome>
where
    M: Fn(&[f64], f64) -> f64,
    J: Fn(&[f64], f64) -> Vec<f64>,
{
    let n = x.len();
    let m = start.len();
    let weights: Vec<f64> = y.iter().map(|v| 1.0 / v.abs()).collect();
    let residuals =
        |p: &[f64]| DVector::from_iterator(n, (0..n).map(|i| (model(p, x[i]) - y[i]) * weights[i]));
    let jac = |p: &[f64]| DMatrix::from_fn(n, m, |i, j| jacobian(p, x[i])[j] * weights[i]);
    let mut p = start.to_vec();
    let mut r = residuals(&p);
    let mut cost = 0.5 * r.norm_squared();
    let mut damping = 1e-3;
    let mut trace = Vec::new();
    for it in 0..MAX_ITERATIONS {
        let jm = jac(&p);
        let grad = jm.transpose() * &r;
        let gnorm = grad.norm();
        trace.push(gnorm);
        if gnorm < GRADIENT_TOL {
            return Ok(LmOutcome {
                params: p,
                iterations: it,
                gradient_norm: gnorm,
            });
        }
        let jtj = jm.transpose() * &jm;
        let mut accepted = false;
        for _ in 0..40 {
            let mut a = jtj.clone();
            for k in 0..m {
                a[(k, k)] += damping * jtj[(k, k)].max(1e-12);
            }
            let Some(step) = a.cholesky().map(|c| c.solve(&(-&grad))) else {
                damping *= 10.0;
                continue;
            };
            let trial: Vec<f64> = p.iter().zip(step.iter()).map(|(a, b)| a + b).collect();
            let rt = residuals(&trial);
            let ct = 0.5 * rt.norm_squared();
            if ct.is_finite() && ct <= cost {
                p = trial;
                r = rt;
                cost = ct;
                damping = (damping / 3.0).max(1e-15);
                accepted = true;
                break;
            }
            damping *= 4.0;
        }
        if !accepted {
            // No descent step left: the gradient is at its rounding floor.
            let g = (jac(&p).transpose() * &r).norm();
            if g < GRADIENT_TOL {
                return Ok(LmOutcome {
                    params: p,
                    iterations: it,
                    gradient_norm: g,
                });
            }
            return Err(Error::Fit {
                iterations: it,
                gradient_norm: g,
                trace,
            });
        }
    }
    Err(Error::Fit {
        iterations: MAX_ITERATIONS,
        gradient_norm: *trace.last().unwrap_or(&f64::NAN),
        trace,
    })
}

fn mean_relative(model: impl Fn(f64) -> f64, x: &[f64], y: &[f64]) -> f64 {
    x.iter()
        .zip(y)
        .map(|(&xi, &yi)| ((model(xi) - yi) / yi).abs())
        .sum::<f64>()
        / x.len() as f64
}

/// Fits the three curve forms to `epsilon_solve` output on `ell_grid`.
pub fn fit_constants(ell_grid: &[f64], conv: ExpansionConvention) -> Result<FitReport> {
    if ell_grid.len() < 4 {
        return Err(Error::invalid("the fit needs at least four separations"));
    }
    let mut e_curve = Vec::with_capacity(ell_grid.len());
    let mut a_curve = Vec::with_capacity(ell_grid.len());
    let mut b_curve = Vec::with_capacity(ell_grid.len());
    for &l in ell_grid {
        let g = epsilon_solve(l, 0.0, 0.0, conv)?;
        e_curve.push(g.e_of_ell);
        a_curve.push(g.a_of_ell);
        b_curve.push(g.b_of_ell);
    }
    let seed = FitConstants::REFERENCE;
    let e_fit = levenberg_marquardt(
        |p, l| p[0] / l,
        |_, l| vec![1.0 / l],
        ell_grid,
        &e_curve,
        &[seed.a1],
    )?;
    let a_fit = levenberg_marquardt(
        |p, l| p[0] * l.powf(-p[1]) + p[2],
        |p, l| {
            let t = l.powf(-p[1]);
            vec![t, -p[0] * t * l.ln(), 1.0]
        },
        ell_grid,
        &a_curve,
        &[seed.b1, seed.c1, seed.a2],
    )?;
    let b_fit = levenberg_marquardt(
        |p, l| p[0] * l + p[1],
        |_, l| vec![l, 1.0],
        ell_grid,
        &b_curve,
        &[seed.b2, seed.a3],
    )?;
    let constants = FitConstants {
        a1: e_fit.params[0],
        b1: a_fit.params[0],
        c1: a_fit.params[1],
        a2: a_fit.params[2],
        b2: b_fit.params[0],
        a3: b_fit.params[1],
    };
    let l1_relative = [
        mean_relative(|l| constants.e_model(l), ell_grid, &e_curve),
        mean_relative(|l| constants.a_model(l), ell_grid, &a_curve),
        mean_relative(|l| constants.b_model(l), ell_grid, &b_curve),
    ];
    Ok(FitReport {
        constants,
        ell: ell_grid.to_vec(),
        e_curve,
        a_curve,
        b_curve,
        l1_relative,
        iterations: [e_fit.iterations, a_fit.iterations, b_fit.iterations],
        gradient_norm: [
            e_fit.gradient_norm,
            a_fit.gradient_norm,
            b_fit.gradient_norm,
        ],
    })
}

/// `n` evenly spaced points on `[lo, hi]`.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n)
            .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
            .collect(),
    }
}
