//! Congruence sums over pairs (m, n) with n ≡ am (mod q).
//!
//! Unsmoothed counts S(q,a,x) and S_{M,N}(q,a) come with their elementary
//! upper bounds; smoothed sums S(q,a;f,X) = Σ (mn)^{-½} f(mn/X) are
//! truncated at mn ≤ τX with τ from the kernel's tail bound.

use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

use crate::arith::{self, KahanSum};
use crate::error::{Error, Result};
use crate::lfunc::TAIL_TARGET;
use crate::mellin::{SmoothingKernel, Truncation};

/// The summation region of a count.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CountRange {
    /// mn ≤ x
    Hyperbola { x: f64 },
    /// M < m ≤ 2M, N < n ≤ 2N
    Box { m: f64, n: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CountResult {
    pub q: u64,
    pub a: i64,
    pub range: CountRange,
    pub count: u64,
    pub bound_rhs: f64,
    pub slack: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prop5Result {
    pub q: u64,
    pub a: i64,
    pub x: f64,
    pub lhs: u64,
    pub rhs: f64,
    pub slack: f64,
}

fn check_residue(function: &'static str, q: u64, a: i64) -> Result<()> {
    if q < 2 || a <= 0 || a as u64 >= q {
        return Err(Error::domain(
            function,
            format!("need 0 < a < q, got a = {a}, q = {q}"),
        ));
    }
    if arith::gcd_signed(a, q) != 1 {
        return Err(Error::NotCoprime {
            function,
            a,
            modulus: q,
        });
    }
    Ok(())
}

fn check_real(function: &'static str, name: &str, x: f64) -> Result<()> {
    if x >= 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(
            function,
            format!("{name} = {x} must be finite and non-negative"),
        ))
    }
}

/// x·log(3x), continuous at 0.
fn x_log_3x(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * (3.0 * x).ln()
    }
}

/// #{1 ≤ n ≤ t : n ≡ r (mod q)} for 0 ≤ r < q.
fn progression_count(t: u64, r: u64, q: u64) -> u64 {
    let first = if r == 0 { q } else { r };
    if first > t {
        0
    } else {
        (t - first) / q + 1
    }
}

/// S(q,a,x) = #{(m, n) : mn ≤ x, n ≡ am (mod q)}.
pub fn count_s(q: u64, a: i64, x: f64) -> Result<CountResult> {
    check_residue("count_S", q, a)?;
    check_real("count_S", "x", x)?;
    let xi = x.floor() as u64;
    let count = count_hyperbola(q, a as u64, xi);
    let bound_rhs = 2.0 * x.sqrt() + 2.0 * x_log_3x(x) / q as f64;
    Ok(CountResult {
        q,
        a,
        range: CountRange::Hyperbola { x },
        count,
        bound_rhs,
        slack: bound_rhs - count as f64,
    })
}

fn count_hyperbola(q: u64, a: u64, x: u64) -> u64 {
    (1..=x)
        .map(|m| progression_count(x / m, arith::mul_mod(a, m, q), q))
        .sum()
}

/// S_{M,N}(q,a) = #{M < m ≤ 2M, N < n ≤ 2N : n ≡ am (mod q)}.
pub fn count_s_mn(q: u64, a: i64, m_size: f64, n_size: f64) -> Result<CountResult> {
    check_residue("count_S_MN", q, a)?;
    check_real("count_S_MN", "M", m_size)?;
    check_real("count_S_MN", "N", n_size)?;
    let (m_lo, m_hi) = (m_size.floor() as u64, (2.0 * m_size).floor() as u64);
    let (n_lo, n_hi) = (n_size.floor() as u64, (2.0 * n_size).floor() as u64);
    let a = a as u64;
    // Loop over whichever variable has the shorter range.
    let count = if m_hi - m_lo <= n_hi - n_lo {
        (m_lo + 1..=m_hi)
            .map(|m| {
                let r = arith::mul_mod(a, m, q);
                progression_count(n_hi, r, q) - progression_count(n_lo, r, q)
            })
            .sum()
    } else {
        let a_inv = arith::inverse_mod(a, q).expect("checked coprime");
        (n_lo + 1..=n_hi)
            .map(|n| {
                let r = arith::mul_mod(a_inv, n, q);
                progression_count(m_hi, r, q) - progression_count(m_lo, r, q)
            })
            .sum()
    };
    let bound_rhs = m_size.min(n_size) + m_size * n_size / q as f64;
    Ok(CountResult {
        q,
        a: a as i64,
        range: CountRange::Box {
            m: m_size,
            n: n_size,
        },
        count,
        bound_rhs,
        slack: bound_rhs - count as f64,
    })
}

/// S(q,a,x) against 3(x/q)log 3x + √(x/a) + 2√(ax/q).
pub fn bound_prop5(q: u64, a: i64, x: f64) -> Result<Prop5Result> {
    let count = count_s(q, a, x)?;
    let (qf, af) = (q as f64, a as f64);
    let rhs = 3.0 * x_log_3x(x) / qf + (x / af).sqrt() + 2.0 * (af * x / qf).sqrt();
    Ok(Prop5Result {
        q,
        a,
        x,
        lhs: count.count,
        rhs,
        slack: rhs - count.count as f64,
    })
}

/// Literal double loops, kept as oracles for the counts above.
pub mod naive {
    /// Σ_{m ≤ x} Σ_{n ≤ x/m} [n ≡ am (mod q)]
    pub fn count_s(q: u64, a: u64, x: f64) -> u64 {
        let x = x.floor() as u64;
        let mut count = 0;
        for m in 1..=x {
            for n in 1..=x / m {
                if n % q == a * m % q {
                    count += 1;
                }
            }
        }
        count
    }

    pub fn count_s_mn(q: u64, a: u64, m_size: f64, n_size: f64) -> u64 {
        let mut count = 0;
        for m in m_size.floor() as u64 + 1..=(2.0 * m_size).floor() as u64 {
            for n in n_size.floor() as u64 + 1..=(2.0 * n_size).floor() as u64 {
                if n % q == a * m % q {
                    count += 1;
                }
            }
        }
        count
    }
}

/// One randomly drawn instance for the count bounds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CountInstance {
    pub q: u64,
    pub a: i64,
    pub x: f64,
    pub m: f64,
    pub n: f64,
}

/// `count` instances with 2 ≤ q ≤ `q_max`, a uniform among the units in
/// (0, q), x uniform in [0, `x_max`] and integer box sizes M, N uniform in
/// [0, √x_max]. The box bound min(M,N) + MN/q needs integer M, N: with
/// M = 0.76 the box already holds m = 1. The generator is xoshiro256++ seeded through SplitMix64,
/// so a seed fixes the sequence on every platform.
pub fn random_count_instances(
    seed: u64,
    count: usize,
    q_max: u64,
    x_max: f64,
) -> Vec<CountInstance> {
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(seed);
    let side = x_max.sqrt();
    (0..count)
        .map(|_| {
            let q = rng.gen_range(2..=q_max.max(2));
            let a = loop {
                let a = rng.gen_range(1..q);
                if arith::gcd(a, q) == 1 {
                    break a as i64;
                }
            };
            CountInstance {
                q,
                a,
                x: rng.gen_range(0.0..=x_max),
                m: rng.gen_range(0..=side as u64) as f64,
                n: rng.gen_range(0..=side as u64) as f64,
            }
        })
        .collect()
}

/// A smoothed congruence sum with its truncation data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmoothSum {
    pub value: f64,
    /// Pairs actually summed.
    pub pairs: u64,
    /// Pairs with mn ≤ τX are kept.
    pub truncation: Truncation,
}

/// S(q, a; f, X) = Σ_{n ≡ am (mod q)} (mn)^{-½} f(mn/X) for a nonzero
/// residue with |a| < q and gcd(a, q) = 1. Negative a means n ≡ −|a|m.
pub fn smooth_s(q: u64, a: i64, kernel: &SmoothingKernel, x_scale: f64) -> Result<SmoothSum> {
    if q < 2 || a == 0 || a.unsigned_abs() >= q {
        return Err(Error::domain(
            "smooth_S",
            format!("need 0 < |a| < q, got a = {a}, q = {q}"),
        ));
    }
    if arith::gcd_signed(a, q) != 1 {
        return Err(Error::NotCoprime {
            function: "smooth_S",
            a,
            modulus: q,
        });
    }
    smooth_s_class(q, arith::reduce(a, q), kernel, x_scale)
}

/// The smoothed sum over one residue class r mod q, with the default
/// truncation. q = 1 gives the unrestricted double sum.
pub fn smooth_s_class(q: u64, r: u64, kernel: &SmoothingKernel, x_scale: f64) -> Result<SmoothSum> {
    check_scale(x_scale)?;
    if q == 0 || r >= q {
        return Err(Error::domain(
            "smooth_S",
            format!("residue {r} is not reduced mod {q}"),
        ));
    }
    let truncation = kernel.truncation(x_scale, 1.0 / q as f64, TAIL_TARGET);
    Ok(smooth_s_truncated(q, r, kernel, x_scale, truncation))
}

fn check_scale(x_scale: f64) -> Result<()> {
    if x_scale > 0.0 && x_scale.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(
            "smooth_S",
            format!("X = {x_scale} must be positive"),
        ))
    }
}

/// As [`smooth_s_class`] with an explicit truncation.
pub fn smooth_s_truncated(
    q: u64,
    r: u64,
    kernel: &SmoothingKernel,
    x_scale: f64,
    truncation: Truncation,
) -> SmoothSum {
    let limit = (x_scale * truncation.tau).floor() as u64;
    let weight = |m: u64, n: u64| {
        let k = m as f64 * n as f64;
        kernel.value(k / x_scale) / k.sqrt()
    };
    let mut acc = KahanSum::new();
    let mut pairs = 0u64;
    let root = limit.isqrt();
    match arith::inverse_mod(r, q) {
        Some(r_inv) => {
            // m ≤ n: step n through its class; n < m: step m through r⁻¹n.
            for m in 1..=root {
                let mut n = first_in_class(m, arith::mul_mod(r, m, q), q);
                while n <= limit / m {
                    acc.add(weight(m, n));
                    pairs += 1;
                    n += q;
                }
            }
            for n in 1..=root {
                let mut m = first_in_class(n + 1, arith::mul_mod(r_inv, n, q), q);
                while m <= limit / n {
                    acc.add(weight(m, n));
                    pairs += 1;
                    m += q;
                }
            }
        }
        None => {
            for m in 1..=limit {
                let mut n = first_in_class(1, arith::mul_mod(r, m, q), q);
                while n <= limit / m {
                    acc.add(weight(m, n));
                    pairs += 1;
                    n += q;
                }
            }
        }
    }
    SmoothSum {
        value: acc.total(),
        pairs,
        truncation,
    }
}

/// Smallest n ≥ lo with n ≡ r (mod q).
fn first_in_class(lo: u64, r: u64, q: u64) -> u64 {
    lo + (r + q - lo % q) % q
}

/// The split of S(q, a; f, X) by the sign of n − am.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SumDecomposition {
    /// n = am
    pub diagonal: f64,
    /// n = am + ql, l ≥ 1
    pub upper: f64,
    /// n = am − ql, l ≥ 1
    pub lower: f64,
    pub total: f64,
    pub truncation: Truncation,
}

/// Computes the three pieces of S(q, a; f, X), each over its own
/// parametrisation, with the same truncation as [`smooth_s`].
pub fn decompose_s(
    q: u64,
    a: i64,
    kernel: &SmoothingKernel,
    x_scale: f64,
) -> Result<SumDecomposition> {
    check_residue("decompose_S", q, a)?;
    check_scale(x_scale)?;
    let truncation = kernel.truncation(x_scale, 1.0 / q as f64, TAIL_TARGET);
    let limit = (x_scale * truncation.tau).floor() as u64;
    let a = a as u64;
    let weight = |m: u64, n: u64| {
        let k = m as f64 * n as f64;
        kernel.value(k / x_scale) / k.sqrt()
    };

    let mut diagonal = KahanSum::new();
    let mut m = 1u64;
    while a * m * m <= limit {
        diagonal.add(weight(m, a * m));
        m += 1;
    }

    let mut upper = KahanSum::new();
    let mut l = 1u64;
    while a + q * l <= limit {
        let mut m = 1u64;
        loop {
            let n = a * m + q * l;
            if m * n > limit {
                break;
            }
            upper.add(weight(m, n));
            m += 1;
        }
        l += 1;
    }

    let mut lower = KahanSum::new();
    let mut l = 1u64;
    loop {
        // smallest m with am − ql ≥ 1; the n it gives can be anywhere in
        // [1, a], so only m0 itself bounds the remaining l.
        let m0 = (q * l + 1).div_ceil(a);
        if m0 > limit {
            break;
        }
        let mut m = m0;
        loop {
            let n = a * m - q * l;
            if m * n > limit {
                break;
            }
            lower.add(weight(m, n));
            m += 1;
        }
        l += 1;
    }

    let (diagonal, upper, lower) = (diagonal.total(), upper.total(), lower.total());
    Ok(SumDecomposition {
        diagonal,
        upper,
        lower,
        total: diagonal + upper + lower,
        truncation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn count_examples() {
        assert_eq!(count_s(5, 1, 10.0).unwrap().count, 5);
        let empty = count_s(7, 3, 0.5).unwrap();
        assert_eq!(empty.count, 0);
        assert!(empty.slack >= 0.0);
        assert_eq!(count_s_mn(7, 3, 0.0, 5.0).unwrap().count, 0);
        assert_eq!(count_s_mn(7, 3, 5.0, 0.0).unwrap().count, 0);
        let box_ = count_s_mn(7, 3, 3.0, 9.0).unwrap();
        assert_eq!(box_.count, naive::count_s_mn(7, 3, 3.0, 9.0));
        // m = 4: n = 12; m = 5: n = 15; m = 6: n = 11, 18
        assert_eq!(box_.count, 4);
        assert!(bound_prop5(5, 1, 10.0).unwrap().slack >= 0.0);
        assert_eq!(bound_prop5(5, 2, 0.9).unwrap().lhs, 0);
    }

    #[test]
    fn count_preconditions() {
        assert!(matches!(count_s(6, 2, 10.0), Err(Error::NotCoprime { .. })));
        assert!(count_s(6, 7, 10.0).is_err());
        assert!(count_s(6, 0, 10.0).is_err());
        assert!(count_s(6, 1, -1.0).is_err());
        assert!(bound_prop5(10, 5, 3.0).is_err());
    }

    #[test]
    fn progression_helpers() {
        assert_eq!(progression_count(10, 0, 5), 2);
        assert_eq!(progression_count(10, 3, 5), 2);
        assert_eq!(progression_count(2, 3, 5), 0);
        assert_eq!(first_in_class(7, 2, 5), 7);
        assert_eq!(first_in_class(8, 2, 5), 12);
        assert_eq!(first_in_class(1, 0, 1), 1);
    }

    #[test]
    fn random_instances_are_reproducible() {
        let a = random_count_instances(7, 50, 1000, 1e4);
        let b = random_count_instances(7, 50, 1000, 1e4);
        assert_eq!(a, b);
        assert_ne!(a, random_count_instances(8, 50, 1000, 1e4));
        for inst in a {
            assert!(
                arith::gcd(inst.a as u64, inst.q) == 1 && inst.a > 0 && (inst.a as u64) < inst.q
            );
        }
    }
}
