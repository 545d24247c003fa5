//! Smoothing kernels V_± and their Mellin data.
//!
//! A kernel is determined by an even entire function `G` with double zeros
//! at the half-integers (the shape) and a parity. Its Mellin transform is
//!
//! ```text
//! f̃(s) = π^{-s} G(s) g(s) / s,
//! g_even(s) = Γ((½+s)/2)² / Γ(¼)²,   g_odd(s) = Γ((3/2+s)/2)² / Γ(¾)²,
//! g_±(s)   = ½ (g_even(s) ± g_odd(s)),
//! ```
//!
//! and V(x) is the inverse transform along a vertical line. The only
//! singularity of f̃ is the simple pole at s = 0 (absent for the minus
//! parity), so the line may be moved freely as long as the residue there is
//! accounted for.

mod contour;
mod kernel;

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::specfun::gamma::gamma_unchecked;

pub use contour::ContourSpec;
pub use kernel::{KernelFamily, LaurentData, SmoothingKernel, Truncation};

/// Which archimedean factor the kernel carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Parity {
    /// V₊ = ½(V₀ + V₁)
    Plus,
    /// V₋ = ½(V₀ − V₁)
    Minus,
    /// V₀, even characters
    Even,
    /// V₁, odd characters
    Odd,
}

impl Parity {
    pub const ALL: [Parity; 4] = [Parity::Plus, Parity::Minus, Parity::Even, Parity::Odd];

    pub fn as_str(self) -> &'static str {
        match self {
            Parity::Plus => "plus",
            Parity::Minus => "minus",
            Parity::Even => "even0",
            Parity::Odd => "odd1",
        }
    }

    /// The kernel V_𝔞 matching a character of the given parity 𝔞.
    pub fn for_character(odd: bool) -> Self {
        if odd {
            Parity::Odd
        } else {
            Parity::Even
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Parity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plus" | "+" => Ok(Parity::Plus),
            "minus" | "-" => Ok(Parity::Minus),
            "even0" | "even" | "0" => Ok(Parity::Even),
            "odd1" | "odd" | "1" => Ok(Parity::Odd),
            other => Err(Error::domain(
                "parity",
                format!("unknown parity {other:?} (expected plus, minus, even0 or odd1)"),
            )),
        }
    }
}

/// The even entire function G(s) defining a smoothing kernel.
///
/// Implementations must satisfy G(−s) = G(s), have a double zero at every
/// half-integer, decay faster than any power of |s| in vertical strips, and
/// be normalised so that G(0) = 1.
pub trait KernelShape: Send + Sync + fmt::Debug {
    fn eval(&self, s: Complex64) -> Complex64;

    fn name(&self) -> &'static str;
}

/// G(s) = e^{s²} cos²(πs).
#[derive(Debug, Clone, Copy, Default)]
pub struct ExpCosSquared;

impl KernelShape for ExpCosSquared {
    #[inline]
    fn eval(&self, s: Complex64) -> Complex64 {
        let c = (PI * s).cos();
        (s * s).exp() * c * c
    }

    fn name(&self) -> &'static str {
        "exp(s^2)cos^2(pi s)"
    }
}

/// G(s) = e^{s²} cos²(πs).
pub fn kernel_g(s: Complex64) -> Complex64 {
    ExpCosSquared.eval(s)
}

const GAMMA_QUARTER: f64 = 3.625_609_908_221_908_3;
const GAMMA_THREE_QUARTERS: f64 = 1.225_416_702_465_177_6;

/// g_parity(s): the normalised squared Γ-ratio.
pub(crate) fn gamma_ratio(s: Complex64, parity: Parity) -> Complex64 {
    let even = || {
        let g = gamma_unchecked((s + 0.5) / 2.0) / GAMMA_QUARTER;
        g * g
    };
    let odd = || {
        let g = gamma_unchecked((s + 1.5) / 2.0) / GAMMA_THREE_QUARTERS;
        g * g
    };
    match parity {
        Parity::Even => even(),
        Parity::Odd => odd(),
        Parity::Plus => 0.5 * (even() + odd()),
        Parity::Minus => 0.5 * (even() - odd()),
    }
}

/// s·f̃(s) = π^{-s} G(s) g(s), the part of the Mellin transform that is
/// analytic at s = 0.
pub(crate) fn analytic_part(shape: &dyn KernelShape, s: Complex64, parity: Parity) -> Complex64 {
    (-s * PI.ln()).exp() * shape.eval(s) * gamma_ratio(s, parity)
}

/// Radius of the circle used to evaluate f̃ near its removable singularity.
const REMOVABLE_RADIUS: f64 = 0.05;
const REMOVABLE_NODES: usize = 64;

/// Whether f̃ has a genuine pole at 0 for this parity.
pub(crate) fn has_pole(parity: Parity) -> bool {
    parity != Parity::Minus
}

pub(crate) fn mellin_with_shape(
    shape: &dyn KernelShape,
    s: Complex64,
    parity: Parity,
) -> Result<Complex64> {
    if s.norm() < REMOVABLE_RADIUS / 2.0 {
        if has_pole(parity) {
            if s.norm() < 1e-300 {
                return Err(Error::PoleProximity {
                    function: "mellin_V",
                    at: format!("{s}"),
                    distance: s.norm(),
                });
            }
            return Ok(analytic_part(shape, s, parity) / s);
        }
        // f̃₋ is entire: use the mean value over a circle around s, where the
        // quotient is well conditioned.
        let mut acc = Complex64::new(0.0, 0.0);
        for k in 0..REMOVABLE_NODES {
            let theta = 2.0 * PI * k as f64 / REMOVABLE_NODES as f64;
            let z = s + Complex64::from_polar(REMOVABLE_RADIUS, theta);
            acc += analytic_part(shape, z, parity) / z;
        }
        return Ok(acc / REMOVABLE_NODES as f64);
    }
    Ok(analytic_part(shape, s, parity) / s)
}

/// The Mellin transform f̃(s) = π^{-s} G(s) g_parity(s) / s of V_parity for
/// the shipped shape G(s) = e^{s²}cos²(πs).
pub fn mellin_v(s: Complex64, parity: Parity) -> Result<Complex64> {
    mellin_with_shape(&ExpCosSquared, s, parity)
}

/// V_parity(x) by direct contour quadrature with the default contour.
pub fn eval_v(x: f64, parity: Parity) -> Result<f64> {
    KernelFamily::standard().kernel(parity).eval_direct(x)
}

/// k_parity(y) by contour quadrature with the default contour.
pub fn eval_k(y: f64, parity: Parity) -> Result<f64> {
    KernelFamily::standard().kernel(parity).k(y)
}

/// Laurent data of f̃ at s = 0 for the default kernel.
pub fn laurent_coeffs(parity: Parity) -> LaurentData {
    KernelFamily::standard().kernel(parity).laurent()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::digamma;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn g_basic_values() {
        assert!((kernel_g(c(0.0, 0.0)) - c(1.0, 0.0)).norm() < 1e-15);
        assert!(kernel_g(c(0.5, 0.0)).norm() < 1e-30);
        // double zero: G(½+ε) = π²e^{¼}ε² + O(ε³)
        let eps = 1e-8;
        let near = kernel_g(c(0.5 + eps, 0.0)).norm();
        assert!((near / (eps * eps) - PI * PI * 0.25f64.exp()).abs() < 1e-6);
        assert!(near <= 1.3e-15);
        assert!(kernel_g(c(-2.5 + 1e-8, 0.0)).norm() <= 1e-12);
        let s = c(0.3, 2.0);
        assert!((kernel_g(s) - kernel_g(-s)).norm() <= 1e-12 * kernel_g(s).norm());
    }

    #[test]
    fn gamma_constants() {
        let g14 = gamma_unchecked(c(0.25, 0.0)).re;
        let g34 = gamma_unchecked(c(0.75, 0.0)).re;
        assert!((g14 - GAMMA_QUARTER).abs() < 1e-14);
        assert!((g34 - GAMMA_THREE_QUARTERS).abs() < 1e-14);
    }

    #[test]
    fn residue_at_zero() {
        let s = c(1e-6, 0.0);
        let plus = mellin_v(s, Parity::Plus).unwrap();
        assert!((s * plus - 1.0).norm() <= 1e-5);
        assert!(mellin_v(c(0.0, 0.0), Parity::Plus).is_err());
    }

    #[test]
    fn minus_transform_is_finite_at_zero() {
        // f̃₋(0) = ½(ψ(¼) − ψ(¾)) / 1 = −π/2
        let at_zero = mellin_v(c(0.0, 0.0), Parity::Minus).unwrap();
        let closed = 0.5 * (digamma(0.25).unwrap() - digamma(0.75).unwrap());
        assert!((at_zero.re - closed).abs() < 1e-12);
        assert!((closed + PI / 2.0).abs() < 1e-12);
        assert!(at_zero.im.abs() < 1e-14);
        // the circle mean agrees with the plain quotient where both apply
        let s = c(0.02, 0.01);
        let mean = mellin_v(s, Parity::Minus).unwrap();
        let quotient = analytic_part(&ExpCosSquared, s, Parity::Minus) / s;
        assert!((mean - quotient).norm() < 1e-12, "{mean} vs {quotient}");
    }

    #[test]
    fn parity_parse_roundtrip() {
        for p in Parity::ALL {
            assert_eq!(p.as_str().parse::<Parity>().unwrap(), p);
        }
        assert!("sideways".parse::<Parity>().is_err());
    }
}
