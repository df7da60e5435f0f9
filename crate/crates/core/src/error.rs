use thiserror::Error;

/// Every failure the library reports.
///
/// Payloads are widened to `f64` so the error type is shared by all scalar types.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{func}: argument outside the domain ({detail})")]
    Domain { func: &'static str, detail: String },

    #[error("{func}: result overflows at argument {arg}")]
    Overflow { func: &'static str, arg: f64 },

    #[error("{func}: series not converged after {terms} terms (partial sum {partial_sum:e}, tail bound {tail_bound:e})")]
    Convergence {
        func: &'static str,
        terms: usize,
        partial_sum: f64,
        tail_bound: f64,
    },

    #[error("quadrature missed tolerance: {value:e} +- {error:e} after {evaluations} evaluations ({reason})")]
    Accuracy {
        value: f64,
        error: f64,
        evaluations: usize,
        reason: &'static str,
    },

    #[error("perturbative regime violated: L_AA + L_BB = {sum:e} exceeds {limit}")]
    Regime { sum: f64, limit: f64 },

    #[error("root not bracketed on [{lo}, {hi}] (f = {f_lo:e}, {f_hi:e})")]
    Bracket {
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },

    #[error("expansion outside its validity: {0}")]
    Expansion(String),

    #[error(
        "fit did not converge after {iterations} iterations (gradient norm {gradient_norm:e})"
    )]
    Fit {
        iterations: usize,
        gradient_norm: f64,
        trace: Vec<f64>,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(func: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            func,
            detail: detail.into(),
        }
    }

    pub(crate) fn invalid(detail: impl Into<String>) -> Self {
        Error::InvalidParameter(detail.into())
    }
}
