use num_complex::Complex64;
use recip_core::arith::{divisors, gcd};
use recip_core::characters::{ortho_formula, CharacterGroup, ParityClass};

fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
    (a - b).norm() <= tol
}

#[test]
fn multiplicative_and_supported_on_units() {
    for q in 1..=60u64 {
        let g = CharacterGroup::new(q).unwrap();
        for chi in g.characters() {
            assert!(close(chi.value(1), Complex64::new(1.0, 0.0), 1e-15));
            for m in 0..q as i64 {
                let unit = gcd(m as u64, q) == 1;
                assert_eq!(chi.value(m).norm() > 0.5, unit, "q = {q}, m = {m}");
                if !unit {
                    continue;
                }
                for n in 1..q as i64 {
                    let lhs = chi.value(m * n);
                    let rhs = chi.value(m) * chi.value(n);
                    assert!(close(lhs, rhs, 1e-12), "q = {q}, χ#{}", chi.index());
                }
            }
            let minus = chi.value(-1);
            let expected = if chi.is_odd() { -1.0 } else { 1.0 };
            assert!(close(minus, Complex64::new(expected, 0.0), 1e-12));
        }
    }
}

#[test]
fn characters_are_distinct_and_close_under_products() {
    for q in [12u64, 15, 16, 24, 45, 63] {
        let g = CharacterGroup::new(q).unwrap();
        let tables: Vec<Vec<u32>> = g
            .characters()
            .map(|c| c.value_exponents().to_vec())
            .collect();
        for i in 0..tables.len() {
            for j in i + 1..tables.len() {
                assert_ne!(tables[i], tables[j], "q = {q}");
            }
        }
        let chars: Vec<_> = g.characters().collect();
        for a in &chars {
            for b in &chars {
                let prod = a.mul(b);
                for n in 0..q as i64 {
                    assert!(close(prod.value(n), a.value(n) * b.value(n), 1e-12));
                }
            }
            let conj = a.conjugate();
            for n in 0..q as i64 {
                assert!(close(conj.value(n), a.value(n).conj(), 1e-12));
            }
        }
    }
}

/// Literal induction: χ mod q is induced from d | q when some character ψ
/// mod d satisfies χ(n) = ψ(n) for every unit n mod q.
fn induced_by_enumeration(chi: &recip_core::characters::DirichletCharacter<'_>, d: u64) -> bool {
    let q = chi.modulus();
    let small = CharacterGroup::new(d).unwrap();
    let found = small.characters().any(|psi| {
        (1..q as i64)
            .filter(|&n| gcd(n as u64, q) == 1)
            .all(|n| close(chi.value(n), psi.value(n), 1e-9))
    });
    found
}

#[test]
fn conductor_matches_induction_enumeration() {
    for q in 1..=100u64 {
        let g = CharacterGroup::new(q).unwrap();
        for chi in g.characters() {
            let brute = divisors(q)
                .into_iter()
                .find(|&d| induced_by_enumeration(&chi, d))
                .unwrap();
            assert_eq!(chi.conductor(), brute, "q = {q}, χ#{}", chi.index());
            assert!(chi.is_induced_from(brute));
        }
    }
}

#[test]
fn primitive_counts_match_closed_form() {
    // number of primitive characters mod q is Σ_{d|q} φ(d)μ(q/d)
    for q in 1..=200u64 {
        let g = CharacterGroup::new(q).unwrap();
        let want: i64 = divisors(q)
            .into_iter()
            .map(|d| recip_core::arith::euler_phi(d) as i64 * recip_core::arith::mobius(q / d))
            .sum();
        assert_eq!(g.primitive_characters(None).count() as i64, want, "q = {q}");
    }
}

#[test]
fn gauss_sums_have_modulus_sqrt_q() {
    for q in 1..=100u64 {
        let g = CharacterGroup::new(q).unwrap();
        for chi in g.primitive_characters(None) {
            let tau = chi.gauss_sum();
            assert!((tau.norm() - (q as f64).sqrt()).abs() <= 1e-10, "q = {q}");
        }
    }
}

#[test]
fn orthogonality_matches_divisor_formula() {
    for q in 1..=50u64 {
        let g = CharacterGroup::new(q).unwrap();
        for a in 0..q as i64 {
            for b in 0..q as i64 {
                if gcd(a as u64, q) != 1 || gcd(b as u64, q) != 1 {
                    assert_eq!(
                        g.ortho_sum(a, b, ParityClass::Even),
                        Complex64::new(0.0, 0.0)
                    );
                    continue;
                }
                for parity in [ParityClass::Even, ParityClass::Odd] {
                    let sum = g.ortho_sum(a, b, parity);
                    let formula = ortho_formula(q, a, b, parity).unwrap();
                    let f = *formula.numer() as f64 / *formula.denom() as f64;
                    assert!(
                        (sum - Complex64::new(f, 0.0)).norm() <= 1e-9,
                        "q = {q}, a = {a}, b = {b}, {parity:?}: {sum} vs {formula}"
                    );
                }
            }
        }
    }
}
