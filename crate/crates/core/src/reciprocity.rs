//! Twisted second moments and the reciprocity relation between
//! S(q, ±a; f, X) and S(a, ∓q; f, aX/q).

use crate::arith::{self, KahanComplex, KahanSum};
use crate::characters::CharacterGroup;
use crate::error::{Error, Result};
use crate::lfunc::{AfeTable, HurwitzTable};
use crate::mellin::{ContourSpec, KernelFamily, Parity, SmoothingKernel};
use crate::specfun::AnalyticConstants;
use crate::sums::{smooth_s, smooth_s_class};

/// Largest prime modulus accepted by the moment routines.
pub const MOMENT_MAX_PRIME: u64 = 10_000;
/// Largest modulus accepted by [`general_modulus_moment`].
pub const GENERAL_MAX_MODULUS: u64 = 2_000;
/// The ε of the error envelopes.
pub const ENVELOPE_EPS: f64 = 0.05;
/// The A of the a^{-½}(X/a)^{-A} envelope term.
pub const ENVELOPE_A: f64 = 5.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MomentMethod {
    BruteForce,
    ViaSums,
    DivisorSum,
}

impl MomentMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            MomentMethod::BruteForce => "bruteforce",
            MomentMethod::ViaSums => "via_sums",
            MomentMethod::DivisorSum => "divisor_sum",
        }
    }
}

/// M(p, h) = Σ_{χ primitive mod p} |L(½, χ)|² χ(h).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentRecord {
    pub p: u64,
    pub h: i64,
    pub value: f64,
    /// Imaginary part of the assembled sum; zero up to rounding.
    pub imag: f64,
    pub method: MomentMethod,
    pub err_estimate: f64,
}

fn check_coprime(function: &'static str, h: i64, p: u64) -> Result<()> {
    if arith::gcd_signed(h, p) != 1 {
        return Err(Error::NotCoprime {
            function,
            a: h,
            modulus: p,
        });
    }
    Ok(())
}

fn check_prime_modulus(function: &'static str, p: u64) -> Result<()> {
    if p > MOMENT_MAX_PRIME {
        return Err(Error::OutOfRange {
            what: "prime modulus",
            value: p,
            min: 2,
            max: MOMENT_MAX_PRIME,
        });
    }
    if !arith::is_prime(p) {
        return Err(Error::NotPrime { function, n: p });
    }
    Ok(())
}

/// M(p, h) from Hurwitz-zeta L-values, p prime.
pub fn moment_bruteforce(p: u64, h: i64) -> Result<MomentRecord> {
    check_prime_modulus("moment_bruteforce", p)?;
    check_coprime("moment_bruteforce", h, p)?;
    moment_over_primitive(p, h)
}

/// M(q, h) from Hurwitz-zeta L-values for any modulus q ≤ 2000. This is
/// the oracle for [`general_modulus_moment`].
pub fn moment_bruteforce_general(q: u64, h: i64) -> Result<MomentRecord> {
    check_general_modulus(q)?;
    check_coprime("moment_bruteforce", h, q)?;
    moment_over_primitive(q, h)
}

fn check_general_modulus(q: u64) -> Result<()> {
    if q == 0 || q > GENERAL_MAX_MODULUS {
        return Err(Error::OutOfRange {
            what: "modulus",
            value: q,
            min: 1,
            max: GENERAL_MAX_MODULUS,
        });
    }
    Ok(())
}

fn moment_over_primitive(q: u64, h: i64) -> Result<MomentRecord> {
    let group = CharacterGroup::new(q)?;
    let table = HurwitzTable::central(q)?;
    let mut acc = KahanComplex::new();
    let mut err = 0.0;
    for chi in group.primitive_characters(None) {
        let l = table.l_value(&chi)?;
        let square = l.value.norm_sqr();
        acc.add(chi.value(h) * square);
        err += 2.0 * l.value.norm() * l.err_estimate + 4.0 * f64::EPSILON * square;
    }
    let total = acc.total();
    Ok(MomentRecord {
        p: q,
        h,
        value: total.re,
        imag: total.im,
        method: MomentMethod::BruteForce,
        err_estimate: err,
    })
}

/// The pieces of M(p, h) = 2φ(p)S(p,h;V₊) + 2φ(p)S(p,−h;V₋) − 2ζ(½)²(1 − p^{-½}).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentSums {
    pub p: u64,
    pub h: i64,
    /// S(p, h; V₊, p)
    pub plus: f64,
    /// S(p, −h; V₋, p)
    pub minus: f64,
    /// 2ζ(½)²(1 − p^{-½}), subtracted in the assembly.
    pub correction: f64,
    /// Sum of the truncation tail bounds of both sums.
    pub tail_bound: f64,
}

impl MomentSums {
    pub fn assembled(&self) -> f64 {
        let two_phi = 2.0 * (self.p - 1) as f64;
        two_phi * self.plus + two_phi * self.minus - self.correction
    }
}

/// The two congruence sums and the correction term for prime p.
pub fn moment_sums(p: u64, h: i64, family: &KernelFamily) -> Result<MomentSums> {
    check_prime_modulus("moment_via_sums", p)?;
    check_coprime("moment_via_sums", h, p)?;
    let pf = p as f64;
    let plus = smooth_s_class(p, arith::reduce(h, p), family.kernel(Parity::Plus), pf)?;
    let minus = smooth_s_class(p, arith::reduce(-h, p), family.kernel(Parity::Minus), pf)?;
    let zeta_sq = AnalyticConstants::compute().zeta_half_squared();
    Ok(MomentSums {
        p,
        h,
        plus: plus.value,
        minus: minus.value,
        correction: 2.0 * zeta_sq * (1.0 - pf.powf(-0.5)),
        tail_bound: plus.truncation.tail_bound + minus.truncation.tail_bound,
    })
}

/// M(p, h) assembled from the two congruence sums, p prime.
pub fn moment_via_sums(p: u64, h: i64, family: &KernelFamily) -> Result<MomentRecord> {
    let sums = moment_sums(p, h, family)?;
    let two_phi = 2.0 * (p - 1) as f64;
    let value = sums.assembled();
    let mass = two_phi * (sums.plus.abs() + sums.minus.abs()) + sums.correction;
    Ok(MomentRecord {
        p,
        h,
        value,
        imag: 0.0,
        method: MomentMethod::ViaSums,
        err_estimate: two_phi * sums.tail_bound + 8.0 * f64::EPSILON * mass,
    })
}

/// M(p, h) for any modulus p ≤ 2000 as the divisor sum
/// 2 Σ_{d|p} φ(d)μ(p/d) [Σ_{n≡hm (d)} V₊ + Σ_{n≡−hm (d)} V₋] over (mn, p) = 1.
///
/// Both inner sums are read off the ratio tables T(r), r ≡ m n⁻¹ (mod p):
/// n ≡ ±hm (mod d) holds exactly when r ≡ ±h⁻¹ (mod d).
pub fn general_modulus_moment(p: u64, h: i64, family: &KernelFamily) -> Result<MomentRecord> {
    Ok(general_modulus_moments(p, &[h], family)?[0])
}

/// [`general_modulus_moment`] for several twists, sharing the tables.
pub fn general_modulus_moments(
    p: u64,
    hs: &[i64],
    family: &KernelFamily,
) -> Result<Vec<MomentRecord>> {
    check_general_modulus(p)?;
    for &h in hs {
        check_coprime("general_modulus_moment", h, p)?;
    }
    let plus = AfeTable::new(p, family.kernel(Parity::Plus));
    let minus = AfeTable::new(p, family.kernel(Parity::Minus));
    let tail = plus.truncation().tail_bound + minus.truncation().tail_bound;
    let divisors = arith::divisors(p);
    let divisor_weight: f64 = divisors
        .iter()
        .map(|&d| 2.0 * arith::euler_phi(d) as f64)
        .sum();
    let records = hs
        .iter()
        .map(|&h| {
            let h_inv = arith::inverse_mod(arith::reduce(h, p), p).expect("h is a unit");
            let mut total = KahanSum::new();
            let mut mass = 0.0;
            for &d in &divisors {
                let mu = arith::mobius(p / d);
                if mu == 0 {
                    continue;
                }
                let target_plus = h_inv % d;
                let target_minus = (d - target_plus) % d;
                let mut class = KahanSum::new();
                for r in 0..p {
                    if r % d == target_plus {
                        class.add(plus.ratio_sum(r));
                    }
                    if r % d == target_minus {
                        class.add(minus.ratio_sum(r));
                    }
                }
                let term = 2.0 * (arith::euler_phi(d) as i64 * mu) as f64 * class.total();
                mass += term.abs();
                total.add(term);
            }
            MomentRecord {
                p,
                h,
                value: total.total(),
                imag: 0.0,
                method: MomentMethod::DivisorSum,
                err_estimate: divisor_weight * tail + 8.0 * f64::EPSILON * mass,
            }
        })
        .collect();
    Ok(records)
}

/// S(q, ±a; f, X) against √(a/q) S(a, ∓q; f, aX/q) and the main terms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReciprocityReport {
    pub q: u64,
    /// Positive; the sign of the relation is in `sign`.
    pub a: u64,
    pub sign: Sign,
    pub x: f64,
    pub lhs: f64,
    pub dual: f64,
    pub term_c1_c2: f64,
    pub term_k: f64,
    /// lhs − dual − term_c1_c2 − term_k, in that order.
    pub residual: f64,
    pub bound: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl ReciprocityReport {
    /// lhs − dual − term_c1_c2 − term_k − residual as stored; zero.
    pub fn closure(&self) -> f64 {
        self.lhs - self.dual - self.term_c1_c2 - self.term_k - self.residual
    }
}

/// q^{-½}(a/q)(X/q)^{½}(1 + X/q)(qX)^ε + a^{-½}(X/a)^{-A} with ε = 0.05, A = 5.
pub fn reciprocity_bound(q: u64, a: u64, x: f64) -> f64 {
    let (q, a) = (q as f64, a as f64);
    q.powf(-0.5) * (a / q) * (x / q).sqrt() * (1.0 + x / q) * (q * x).powf(ENVELOPE_EPS)
        + a.powf(-0.5) * (x / a).powf(-ENVELOPE_A)
}

fn check_pair(function: &'static str, q: u64, a: u64, x: f64) -> Result<()> {
    if a == 0 || a >= q {
        return Err(Error::domain(
            function,
            format!("need 0 < a < q, got a = {a}, q = {q}"),
        ));
    }
    if arith::gcd(a, q) != 1 {
        return Err(Error::NotCoprime {
            function,
            a: a as i64,
            modulus: q,
        });
    }
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::domain(function, format!("X = {x} must be positive")));
    }
    Ok(())
}

/// √(a/q) S(a, r; f, aX/q) with r the least non-negative residue; a = 1
/// is the unrestricted sum.
fn dual_sum(q: u64, a: u64, r: u64, kernel: &SmoothingKernel, x: f64) -> Result<f64> {
    let (qf, af) = (q as f64, a as f64);
    let s = smooth_s_class(a, r, kernel, af * x / qf)?;
    Ok((af / qf).sqrt() * s.value)
}

/// a^{-½}(½a₋₁ log(X/a) + ½a₀ + γa₋₁).
pub fn diagonal_main_term(a: u64, x: f64, kernel: &SmoothingKernel) -> f64 {
    let l = kernel.laurent();
    let gamma = AnalyticConstants::compute().euler_gamma;
    let af = a as f64;
    af.powf(-0.5) * (0.5 * l.a_minus1 * (x / af).ln() + 0.5 * l.a_zero + gamma * l.a_minus1)
}

/// S(q, a; f, X) = √(a/q) S(a, −q; f, aX/q) + diagonal main term + q^{-½}k(q/X) + residual.
pub fn reciprocity_plus(
    q: u64,
    a: u64,
    x: Option<f64>,
    kernel: &SmoothingKernel,
) -> Result<ReciprocityReport> {
    let x = x.unwrap_or(q as f64);
    check_pair("reciprocity_plus", q, a, x)?;
    let lhs = smooth_s(q, a as i64, kernel, x)?.value;
    let dual = dual_sum(q, a, arith::reduce(-(q as i64), a), kernel, x)?;
    let term_c1_c2 = diagonal_main_term(a, x, kernel);
    let term_k = (q as f64).powf(-0.5) * kernel.k(q as f64 / x)?;
    Ok(report(q, a, Sign::Plus, x, lhs, dual, term_c1_c2, term_k))
}

/// S(q, −a; f, X) = √(a/q) S(a, q; f, aX/q) + q^{-½}k(q/X) + residual.
pub fn reciprocity_minus(
    q: u64,
    a: u64,
    x: Option<f64>,
    kernel: &SmoothingKernel,
) -> Result<ReciprocityReport> {
    let x = x.unwrap_or(q as f64);
    check_pair("reciprocity_minus", q, a, x)?;
    let lhs = smooth_s(q, -(a as i64), kernel, x)?.value;
    let dual = dual_sum(q, a, q % a, kernel, x)?;
    let term_k = (q as f64).powf(-0.5) * kernel.k(q as f64 / x)?;
    Ok(report(q, a, Sign::Minus, x, lhs, dual, 0.0, term_k))
}

#[allow(clippy::too_many_arguments)]
fn report(
    q: u64,
    a: u64,
    sign: Sign,
    x: f64,
    lhs: f64,
    dual: f64,
    term_c1_c2: f64,
    term_k: f64,
) -> ReciprocityReport {
    ReciprocityReport {
        q,
        a,
        sign,
        x,
        lhs,
        dual,
        term_c1_c2,
        term_k,
        residual: lhs - dual - term_c1_c2 - term_k,
        bound: reciprocity_bound(q, a, x),
    }
}

/// The three constants of the prime-modulus reciprocity formula, recomputed
/// from the kernels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstantChain {
    /// 2c₁⁺ = a₋₁(V₊)
    pub two_c1: f64,
    /// 2c₂⁺ = a₀(V₊) + 2γa₋₁(V₊)
    pub two_c2: f64,
    /// γ − log 8π
    pub a_constant: f64,
    /// 2(k₊(1) + k₋(1))
    pub two_c3: f64,
    /// ζ(½)²
    pub zeta_half_sq: f64,
}

pub fn constant_chain(family: &KernelFamily) -> Result<ConstantChain> {
    let consts = AnalyticConstants::compute();
    let plus = family.kernel(Parity::Plus);
    let minus = family.kernel(Parity::Minus);
    let l = plus.laurent();
    // k on its defining line; no residue enters.
    let k_line = ContourSpec {
        abscissa: ContourSpec::K_DEFAULT.abscissa,
        ..family.contour()
    };
    Ok(ConstantChain {
        two_c1: l.a_minus1,
        two_c2: l.a_zero + 2.0 * consts.euler_gamma * l.a_minus1,
        a_constant: consts.a,
        two_c3: 2.0 * (plus.k_on_contour(1.0, &k_line)? + minus.k_on_contour(1.0, &k_line)?),
        zeta_half_sq: consts.zeta_half_squared(),
    })
}

/// M(p, h) against its reciprocal M(h, −p) for primes h < p.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorollaryTerms {
    pub p: u64,
    pub h: u64,
    pub moment: MomentRecord,
    pub dual_moment: MomentRecord,
    /// (p/√h)(log(p/h) + A)
    pub main: f64,
    /// (√p/√h)(h/φ(h)) M(h, −p)
    pub dual_precise: f64,
    /// ζ(½)²(√p − 2 + 2(√p/√h)(h/φ(h))(1 − h^{-½}))
    pub zeta_precise: f64,
    /// √(p/h) M(h, −p)
    pub dual_headline: f64,
    /// ζ(½)²√p
    pub zeta_headline: f64,
    /// ζ(½)²(√p − 2 + 2√p/√h + 2√p/h), the simplification as printed
    pub zeta_printed: f64,
    pub residual_precise: f64,
    pub residual_headline: f64,
    /// The precise residual with `zeta_printed` in place of `zeta_precise`.
    pub residual_printed: f64,
}

/// 10·(p^{ε−½}h + p^{½}h^{−A}), the calibrated envelope for the precise residual.
pub fn corollary_bound(p: u64, h: u64) -> f64 {
    let (p, h) = (p as f64, h as f64);
    10.0 * (p.powf(ENVELOPE_EPS - 0.5) * h + p.sqrt() * h.powf(-ENVELOPE_A))
}

/// Residuals of the precise and headline forms of the relation between
/// M(p, h) and M(h, −p).
pub fn corollary_residual(p: u64, h: u64) -> Result<CorollaryTerms> {
    check_prime_modulus("corollary_residual", p)?;
    check_prime_modulus("corollary_residual", h)?;
    if h >= p {
        return Err(Error::domain(
            "corollary_residual",
            format!("need h < p, got h = {h}, p = {p}"),
        ));
    }
    let moment = moment_bruteforce(p, h as i64)?;
    let dual_moment = moment_bruteforce(h, -(p as i64))?;
    let consts = AnalyticConstants::compute();
    let zeta_sq = consts.zeta_half_squared();
    let (pf, hf) = (p as f64, h as f64);
    let (sp, sh) = (pf.sqrt(), hf.sqrt());
    let h_over_phi = hf / (hf - 1.0);

    let main = pf / sh * ((pf / hf).ln() + consts.a);
    let dual_precise = sp / sh * h_over_phi * dual_moment.value;
    let zeta_precise = zeta_sq * (sp - 2.0 + 2.0 * sp / sh * h_over_phi * (1.0 - 1.0 / sh));
    let dual_headline = (pf / hf).sqrt() * dual_moment.value;
    let zeta_headline = zeta_sq * sp;
    let zeta_printed = zeta_sq * (sp - 2.0 + 2.0 * sp / sh + 2.0 * sp / hf);

    let m = moment.value;
    Ok(CorollaryTerms {
        p,
        h,
        moment,
        dual_moment,
        main,
        dual_precise,
        zeta_precise,
        dual_headline,
        zeta_headline,
        zeta_printed,
        residual_precise: m - main - dual_precise - zeta_precise,
        residual_headline: m - main - dual_headline - zeta_headline,
        residual_printed: m - main - dual_precise - zeta_printed,
    })
}
