use std::f64::consts::PI;

use num_complex::Complex64;

use super::gamma::gamma_unchecked;
use crate::error::{Error, Result};

/// B_2, B_4, …, B_24.
const BERNOULLI_EVEN: [f64; 12] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174_611.0 / 330.0,
    854_513.0 / 138.0,
    -236_364_091.0 / 2730.0,
];

const POLE_TOLERANCE: f64 = 1e-9;

fn default_terms(s: Complex64) -> usize {
    30usize.max((2.0 * s.im.abs()).ceil() as usize)
}

/// (e^z − 1)/z, accurate near z = 0.
fn exprel(z: Complex64) -> Complex64 {
    if z.norm() < 1e-3 {
        1.0 + z * (0.5 + z * (1.0 / 6.0 + z / 24.0))
    } else {
        (z.exp() - 1.0) / z
    }
}

/// Euler–Maclaurin sum for ζ(s, α) with `n_terms` explicit terms. With
/// `regular` set, the 1/(s−1) polar part is removed, which keeps the sum
/// finite at s = 1.
fn euler_maclaurin(s: Complex64, alpha: f64, n_terms: usize, regular: bool) -> Complex64 {
    let mut head = crate::arith::KahanComplex::new();
    for n in 0..n_terms {
        head.add((-s * (n as f64 + alpha).ln()).exp());
    }
    let w = n_terms as f64 + alpha;
    let ln_w = w.ln();
    let w_pow = (-s * ln_w).exp(); // w^{-s}
    let s_minus_1 = s - 1.0;
    let polar = if regular {
        // (w^{1-s} - 1)/(s - 1)
        -ln_w * exprel(-s_minus_1 * ln_w)
    } else {
        w * w_pow / s_minus_1
    };
    let mut tail = polar + 0.5 * w_pow;

    // Σ B_2k/(2k)! · s(s+1)…(s+2k−2) · w^{−s−2k+1}
    let mut rising = s;
    let mut factorial = 2.0;
    let mut w_k = w_pow / w;
    let inv_w2 = 1.0 / (w * w);
    for (k, &b) in BERNOULLI_EVEN.iter().enumerate() {
        if k > 0 {
            let j = 2.0 * k as f64;
            rising *= (s + j - 1.0) * (s + j);
            factorial *= (j + 1.0) * (j + 2.0);
            w_k *= inv_w2;
        }
        tail += b / factorial * rising * w_k;
    }
    head.total() + tail
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha <= 1.0 {
        Ok(())
    } else {
        Err(Error::domain(
            "hurwitz_zeta",
            format!("alpha = {alpha} must lie in (0, 1]"),
        ))
    }
}

fn check_pole(function: &'static str, s: Complex64) -> Result<()> {
    let d = (s - 1.0).norm();
    if d < POLE_TOLERANCE {
        Err(Error::PoleProximity {
            function,
            at: format!("{s}"),
            distance: d,
        })
    } else {
        Ok(())
    }
}

/// Hurwitz zeta ζ(s, α) = Σ_{n≥0} (n + α)^{−s}, continued to s ≠ 1.
pub fn hurwitz_zeta(s: Complex64, alpha: f64) -> Result<Complex64> {
    check_pole("hurwitz_zeta", s)?;
    check_alpha(alpha)?;
    Ok(euler_maclaurin(s, alpha, default_terms(s), false))
}

/// ζ(s, α) − 1/(s − 1), which is entire in `s`.
///
/// Sums of χ(a)ζ(s, a/q) over a full residue system kill the polar part for
/// non-principal χ, so this is the quantity tabulated for L-values.
pub fn hurwitz_zeta_regular(s: Complex64, alpha: f64) -> Result<Complex64> {
    check_alpha(alpha)?;
    Ok(euler_maclaurin(s, alpha, default_terms(s), true))
}

/// ζ(s, α) together with the change observed when the number of explicit
/// terms is doubled.
pub fn hurwitz_zeta_with_estimate(s: Complex64, alpha: f64) -> Result<(Complex64, f64)> {
    check_pole("hurwitz_zeta", s)?;
    check_alpha(alpha)?;
    let n = default_terms(s);
    let coarse = euler_maclaurin(s, alpha, n, false);
    let fine = euler_maclaurin(s, alpha, 2 * n, false);
    Ok((fine, (fine - coarse).norm()))
}

/// Riemann ζ(s). Uses Euler–Maclaurin directly for Re s ≥ 0 and the
/// functional equation for Re s < 0.
pub fn riemann_zeta(s: Complex64) -> Result<Complex64> {
    check_pole("riemann_zeta", s)?;
    Ok(zeta_unchecked(s))
}

pub(crate) fn zeta_unchecked(s: Complex64) -> Complex64 {
    if s.re >= 0.0 {
        euler_maclaurin(s, 1.0, default_terms(s), false)
    } else {
        let one = Complex64::new(1.0, 0.0);
        let reflected = euler_maclaurin(one - s, 1.0, default_terms(s), false);
        let two_pow = (s * 2f64.ln()).exp();
        let pi_pow = ((s - 1.0) * PI.ln()).exp();
        two_pow * pi_pow * (0.5 * PI * s).sin() * gamma_unchecked(one - s) * reflected
    }
}

/// ζ(s) with a doubling-based error estimate.
pub fn riemann_zeta_with_estimate(s: Complex64) -> Result<(Complex64, f64)> {
    check_pole("riemann_zeta", s)?;
    if s.re < 0.0 {
        let v = zeta_unchecked(s);
        return Ok((v, v.norm() * 1e-15));
    }
    let n = default_terms(s);
    let coarse = euler_maclaurin(s, 1.0, n, false);
    let fine = euler_maclaurin(s, 1.0, 2 * n, false);
    Ok((fine, (fine - coarse).norm()))
}
