//! Special functions used by the closed forms and integrands.

mod bessel;
mod erf;
mod gamma;
mod hypergeometric;

pub use bessel::{bessel_k, bessel_k_half_integer};
pub use erf::{dawson, erf, erfc, erfcx, erfi, erfi_scaled};
pub use hypergeometric::{hyp2f2, Accuracy};

pub(crate) use erf::{dawson_raw, erfc_raw, erfcx_nonneg};
pub(crate) use gamma::gamma_half_integer;
