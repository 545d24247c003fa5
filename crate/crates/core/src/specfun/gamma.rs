use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

// Lanczos approximation, g = 7, n = 9.
const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

const POLE_TOLERANCE: f64 = 1e-12;

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// log Γ(z) for Re z ≥ ½ (a continuous branch, not necessarily principal).
fn ln_gamma_right(z: Complex64) -> Complex64 {
    let z = z - 1.0;
    let mut series = Complex64::new(LANCZOS_COEFFS[0], 0.0);
    for (i, &c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        series += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    LN_SQRT_2PI + (z + 0.5) * t.ln() - t + series.ln()
}

fn pole_distance(s: Complex64) -> f64 {
    if s.re > 0.5 {
        return f64::INFINITY;
    }
    let nearest = s.re.round().min(0.0);
    (s - nearest).norm()
}

/// Γ(s) for complex `s`, using reflection for Re s < ½.
pub fn complex_gamma(s: Complex64) -> Result<Complex64> {
    let d = pole_distance(s);
    if d < POLE_TOLERANCE {
        return Err(Error::PoleProximity {
            function: "complex_gamma",
            at: format!("{s}"),
            distance: d,
        });
    }
    Ok(gamma_unchecked(s))
}

pub(crate) fn gamma_unchecked(s: Complex64) -> Complex64 {
    if s.re < 0.5 {
        let one_minus = Complex64::new(1.0, 0.0) - s;
        PI / ((PI * s).sin() * ln_gamma_right(one_minus).exp())
    } else {
        ln_gamma_right(s).exp()
    }
}

/// A branch of log Γ(s), continuous on Re s ≥ ½. For Re s < ½ it is
/// assembled from the reflection formula and may differ from the principal
/// branch by a multiple of 2πi; `exp` of it is always Γ(s).
pub fn ln_gamma(s: Complex64) -> Result<Complex64> {
    let d = pole_distance(s);
    if d < POLE_TOLERANCE {
        return Err(Error::PoleProximity {
            function: "ln_gamma",
            at: format!("{s}"),
            distance: d,
        });
    }
    if s.re < 0.5 {
        let one_minus = Complex64::new(1.0, 0.0) - s;
        Ok(Complex64::new(PI.ln(), 0.0) - (PI * s).sin().ln() - ln_gamma_right(one_minus))
    } else {
        Ok(ln_gamma_right(s))
    }
}

/// ψ(x) = Γ'(x)/Γ(x) for real x > 0.
pub fn digamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain(
            "digamma",
            format!("x = {x} must be positive"),
        ));
    }
    let mut shift = 0.0;
    let mut x = x;
    while x < 10.0 {
        shift -= 1.0 / x;
        x += 1.0;
    }
    let inv2 = 1.0 / (x * x);
    // Σ B_2k / (2k x^2k), k = 1..7, in Horner form.
    let tail = inv2
        * (1.0 / 12.0
            - inv2
                * (1.0 / 120.0
                    - inv2
                        * (1.0 / 252.0
                            - inv2
                                * (1.0 / 240.0
                                    - inv2
                                        * (1.0 / 132.0
                                            - inv2 * (691.0 / 32_760.0 - inv2 / 12.0))))));
    Ok(shift + x.ln() - 0.5 / x - tail)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::EULER_GAMMA;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn rel_err(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / b.norm()
    }

    #[test]
    fn special_values() {
        assert!(rel_err(complex_gamma(c(1.0, 0.0)).unwrap(), c(1.0, 0.0)) < 1e-14);
        assert!(rel_err(complex_gamma(c(0.5, 0.0)).unwrap(), c(PI.sqrt(), 0.0)) < 1e-14);
        assert!(rel_err(complex_gamma(c(5.0, 0.0)).unwrap(), c(24.0, 0.0)) < 1e-14);
        // Γ(1/4), 40-digit reference computed offline with mpmath
        let g14 = complex_gamma(c(0.25, 0.0)).unwrap();
        assert!(rel_err(g14, c(3.625_609_908_221_908_3, 0.0)) < 1e-13);
    }

    #[test]
    fn matches_high_precision_reference() {
        // (s, Γ(s)) pairs from mpmath at 30 digits.
        let table = [
            (
                c(0.5, 10.0),
                c(3.378_724_376_234_235_8e-7, 1.689_369_839_038_918_9e-7),
            ),
            (
                c(-4.3, 2.5),
                c(6.459_242_267_973_619_8e-6, 1.192_085_564_996_864e-4),
            ),
            (
                c(9.5, -30.0),
                c(-1.924_802_217_283_012e-7, 4.026_368_352_989_751_9e-9),
            ),
            (
                c(2.0, 40.0),
                c(-3.263_465_798_082_672_5e-25, 2.335_669_597_087_354_7e-26),
            ),
            (
                c(-0.7, -15.0),
                c(7.290_517_936_422_907_6e-13, 5.635_003_293_032_614_3e-12),
            ),
            (
                c(0.1, 0.2),
                c(1.539_100_343_386_794_7, -3.838_491_901_837_911),
            ),
            (c(-2.5, 0.0), c(-0.945_308_720_482_941_9, 0.0)),
            (
                c(3.25, 7.5),
                c(2.239_374_718_257_473_1e-3, -4.667_384_900_918_677_3e-3),
            ),
        ];
        for (s, want) in table {
            let got = complex_gamma(s).unwrap();
            assert!(
                rel_err(got, want) < 1e-12,
                "s = {s}: got {got}, want {want}"
            );
        }
    }

    #[test]
    fn pole_rejected() {
        assert!(complex_gamma(c(0.0, 0.0)).is_err());
        assert!(complex_gamma(c(-3.0, 1e-13)).is_err());
        assert!(complex_gamma(c(-3.0, 1e-6)).is_ok());
    }

    #[test]
    fn digamma_gauss_values() {
        let ln2 = 2f64.ln();
        assert!((digamma(1.0).unwrap() + EULER_GAMMA).abs() < 1e-14);
        assert!((digamma(0.5).unwrap() - (-EULER_GAMMA - 2.0 * ln2)).abs() < 1e-13);
        let sum = digamma(0.25).unwrap() + digamma(0.75).unwrap();
        assert!((sum - (-2.0 * EULER_GAMMA - 6.0 * ln2)).abs() < 1e-13);
        // reflection ψ(1−x) − ψ(x) = π cot πx
        let x = 0.3;
        let lhs = digamma(1.0 - x).unwrap() - digamma(x).unwrap();
        assert!((lhs - PI / (PI * x).tan()).abs() < 1e-13);
        assert!(digamma(0.0).is_err());
        assert!(digamma(-1.5).is_err());
    }

    proptest! {
        #[test]
        fn reflection_in_strip(re in 0.01f64..0.99, im in -20.0f64..20.0) {
            let s = c(re, im);
            let lhs = complex_gamma(s).unwrap() * complex_gamma(c(1.0, 0.0) - s).unwrap() * (PI * s).sin();
            prop_assert!((lhs - c(PI, 0.0)).norm() < 1e-10, "s = {}, lhs = {}", s, lhs);
        }

        #[test]
        fn recurrence(re in -4.9f64..9.0, im in -40.0f64..40.0) {
            let s = c(re, im);
            prop_assume!(pole_distance(s) > 1e-3);
            let g = complex_gamma(s).unwrap();
            let g1 = complex_gamma(s + 1.0).unwrap();
            prop_assert!(rel_err(g1, s * g) < 1e-11, "s = {}", s);
        }
    }
}
