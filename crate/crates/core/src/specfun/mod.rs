//! Complex special functions on and near the critical strip.
//!
//! Everything here is plain `f64`/[`Complex64`] arithmetic: the Lanczos
//! approximation for Γ with reflection, an asymptotic series for ψ on the
//! positive axis, and Euler–Maclaurin summation for the Riemann and Hurwitz
//! zeta functions.

mod constants;
pub(crate) mod gamma;
pub(crate) mod zeta;

pub use constants::{AnalyticConstants, EULER_GAMMA, ZETA_HALF};
pub use gamma::{complex_gamma, digamma, ln_gamma};
pub use zeta::{
    hurwitz_zeta, hurwitz_zeta_regular, hurwitz_zeta_with_estimate, riemann_zeta,
    riemann_zeta_with_estimate,
};

pub use num_complex::Complex64;
