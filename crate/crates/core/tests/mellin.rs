use num_complex::Complex64;
use proptest::prelude::*;
use recip_core::mellin::{eval_k, eval_v, mellin_v, ContourSpec, KernelFamily, Parity};
use recip_core::specfun::AnalyticConstants;

fn kernel(parity: Parity) -> &'static recip_core::mellin::SmoothingKernel {
    KernelFamily::standard().kernel(parity)
}

#[test]
fn parity_algebra_on_log_grid() {
    let (plus, minus) = (kernel(Parity::Plus), kernel(Parity::Minus));
    let (even, odd) = (kernel(Parity::Even), kernel(Parity::Odd));
    for i in 0..200 {
        let x = 10f64.powf(-8.0 + 11.0 * i as f64 / 199.0);
        let v0 = even.eval_direct(x).unwrap();
        let v1 = odd.eval_direct(x).unwrap();
        let vp = plus.eval_direct(x).unwrap();
        let vm = minus.eval_direct(x).unwrap();
        assert!((0.5 * (v0 + v1) - vp).abs() <= 1e-12, "x = {x}");
        assert!((0.5 * (v0 - v1) - vm).abs() <= 1e-12, "x = {x}");
    }
}

#[test]
fn v_is_independent_of_the_abscissa() {
    for parity in [Parity::Plus, Parity::Minus] {
        let k = kernel(parity);
        // A line at c carries mass ~ x^{-c}e^{c²}; far right lines at small x
        // lose digits to cancellation, so those pairs are left out.
        let cases: [(f64, &[f64]); 5] = [
            (0.01, &[0.6, 1.5]),
            (0.1, &[0.6, 1.5, 2.2]),
            (1.0, &[0.6, 1.5, 2.2, 2.9]),
            (5.0, &[0.6, 1.5, 2.2, 2.9]),
            (30.0, &[0.6, 1.5, 2.2, 2.9]),
        ];
        for (x, lines) in cases {
            let base = k.eval_on_contour(x, &ContourSpec::V_DEFAULT).unwrap();
            for &c in lines {
                let moved = k
                    .eval_on_contour(x, &ContourSpec::V_DEFAULT.at_abscissa(c))
                    .unwrap();
                assert!(
                    (moved - base).abs() <= 1e-10,
                    "{parity} x={x} c={c}: {moved} vs {base}"
                );
            }
        }
    }
}

#[test]
fn k_is_independent_of_the_abscissa() {
    for parity in [Parity::Plus, Parity::Minus] {
        let k = kernel(parity);
        let cases: [(f64, &[f64]); 4] = [
            (0.3, &[1.6, 2.5]),
            (1.0, &[1.6, 2.5, 3.0]),
            (4.0, &[1.6, 2.5, 3.0]),
            (40.0, &[1.6, 2.5, 3.0]),
        ];
        for (y, lines) in cases {
            let base = k.k_on_contour(y, &ContourSpec::K_DEFAULT).unwrap();
            for &c in lines {
                let moved = k
                    .k_on_contour(y, &ContourSpec::K_DEFAULT.at_abscissa(c))
                    .unwrap();
                assert!((moved - base).abs() <= 1e-10, "{parity} y={y} c={c}");
            }
        }
    }
    let plus = kernel(Parity::Plus);
    let at2 = plus.k_on_contour(1.0, &ContourSpec::K_DEFAULT).unwrap();
    let at3 = plus
        .k_on_contour(1.0, &ContourSpec::K_DEFAULT.at_abscissa(3.0))
        .unwrap();
    assert!((at2 - at3).abs() <= 1e-9);
}

#[test]
fn k_values() {
    let zeta_sq = AnalyticConstants::compute().zeta_half_squared();
    let sum = 2.0 * (eval_k(1.0, Parity::Plus).unwrap() + eval_k(1.0, Parity::Minus).unwrap());
    assert!((sum - zeta_sq).abs() <= 1e-8, "{sum} vs {zeta_sq}");
    assert!(eval_k(1e3, Parity::Plus).unwrap().abs() <= 1e-6);
}

// ∫₀^∞ V₊(x) x^{s−1} dx = ∫ V₊(eᵘ) e^{us} du by the trapezoid rule in u.
// The integrand decays like e^{us − u²/4} on the right, so the range has
// to reach well past x = 10³ before x^s V₊(x) is negligible.
fn real_axis_mellin(s: f64) -> f64 {
    let k = kernel(Parity::Plus);
    let (u_lo, u_hi, h) = (-40.0f64, 21.0f64, 0.01);
    let n = ((u_hi - u_lo) / h).round() as usize;
    let mut acc = 0.0;
    for i in 0..=n {
        let u = u_lo + h * i as f64;
        let v = if u < -18.0 {
            1.0
        } else {
            k.eval_direct(u.exp()).unwrap()
        };
        let w = if i == 0 || i == n { 0.5 } else { 1.0 };
        acc += w * v * (u * s).exp();
    }
    acc * h
}

#[test]
fn mellin_round_trip_on_the_real_axis() {
    for s in [1.0, 2.0, 3.0] {
        let transform = mellin_v(Complex64::new(s, 0.0), Parity::Plus).unwrap();
        assert!(transform.im.abs() < 1e-14);
        let direct = real_axis_mellin(s);
        let tol = if s == 2.0 { 1e-8 } else { 1e-7 };
        assert!(
            (direct - transform.re).abs() <= tol,
            "s = {s}: {direct} vs {}",
            transform.re
        );
    }
}

#[test]
fn v_small_and_moderate_x() {
    assert!((eval_v(1e-8, Parity::Plus).unwrap() - 1.0).abs() <= 1e-6);
    assert!(eval_v(1e-8, Parity::Minus).unwrap().abs() <= 1e-6);
    // The decay sets in slowly: V₊(50) is still of order 0.1.
    let v50 = eval_v(50.0, Parity::Plus).unwrap();
    assert!((v50 + 0.1007).abs() < 1e-3, "{v50}");
    assert!(eval_v(1e5, Parity::Plus).unwrap().abs() <= 1e-14);
}

#[test]
fn polynomial_tail_constant_is_finite() {
    for parity in [Parity::Plus, Parity::Minus] {
        let k = kernel(parity);
        let c5 = (0..=90)
            .map(|i| {
                let x = 10.0 + i as f64;
                k.eval_direct(x).unwrap().abs() * x.powi(5)
            })
            .fold(0.0f64, f64::max);
        assert!(c5.is_finite() && c5 > 0.0);
        let x = 100.0;
        assert!(k.eval_direct(x).unwrap().abs() <= c5 * x.powi(-5));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cache_matches_quadrature(u in -13.8f64..3.9) {
        let x = u.exp();
        for parity in [Parity::Plus, Parity::Minus] {
            let k = kernel(parity);
            prop_assert!((k.value(x) - k.eval_direct(x).unwrap()).abs() <= 1e-10);
        }
    }

    #[test]
    fn transform_is_conjugate_symmetric(t in 0.1f64..5.0) {
        // f̃(s̄) = conj f̃(s): V is real.
        let s = Complex64::new(0.7, t);
        let a = mellin_v(s, Parity::Plus).unwrap();
        let b = mellin_v(s.conj(), Parity::Plus).unwrap();
        prop_assert!((a - b.conj()).norm() <= 1e-13 * a.norm().max(1e-300));
    }
}
