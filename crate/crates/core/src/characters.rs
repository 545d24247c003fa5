//! Dirichlet characters modulo q.
//!
//! The unit group (ℤ/q)^* is decomposed by CRT into prime-power pieces,
//! each cyclic (odd p) or ⟨−1⟩ × ⟨5⟩ (powers of 2). A character is an
//! exponent vector against those generators, and its values are stored as
//! exponents j of e(j/N), N the exponent of the group, so long character
//! sums see exact roots of unity from a single table.

use std::f64::consts::PI;

use num_complex::Complex64;
use num_rational::Rational64;

use crate::arith::{self, KahanComplex};
use crate::error::{Error, Result};

pub const MAX_MODULUS: u64 = 1_000_000;

/// Marker for residues that are not units.
pub const NON_UNIT: u32 = u32::MAX;

/// A generator of one cyclic factor of (ℤ/q)^*.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UnitGenerator {
    /// The generator as a residue mod q (1 modulo the other prime powers).
    pub residue: u64,
    pub order: u64,
    /// Prime power of the CRT piece it belongs to.
    pub prime: u64,
    pub exponent: u32,
    kind: GeneratorKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum GeneratorKind {
    /// primitive root of an odd prime power
    Cyclic,
    /// −1 modulo 2^e, e ≥ 2
    MinusOne,
    /// 5 modulo 2^e, e ≥ 3
    Five,
}

/// Which primitive characters a sum runs over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ParityClass {
    Even,
    Odd,
}

impl ParityClass {
    fn sign(self) -> i64 {
        match self {
            ParityClass::Even => 1,
            ParityClass::Odd => -1,
        }
    }
}

#[derive(Debug, Clone)]
pub struct CharacterGroup {
    modulus: u64,
    phi: u64,
    generators: Vec<UnitGenerator>,
    /// Exponent of the group: lcm of the generator orders.
    exponent: u64,
    /// Discrete logarithms, `generators.len()` entries per residue.
    dlog: Vec<u32>,
    roots: Vec<Complex64>,
}

impl CharacterGroup {
    pub fn new(q: u64) -> Result<Self> {
        if q == 0 || q > MAX_MODULUS {
            return Err(Error::OutOfRange {
                what: "modulus",
                value: q,
                min: 1,
                max: MAX_MODULUS,
            });
        }
        let mut generators = Vec::new();
        for (p, e) in arith::factorize(q) {
            let pe = p.pow(e);
            let lift = |g: u64| crt_lift(g, pe, q);
            if p == 2 {
                if e >= 2 {
                    generators.push(UnitGenerator {
                        residue: lift(pe - 1),
                        order: 2,
                        prime: 2,
                        exponent: e,
                        kind: GeneratorKind::MinusOne,
                    });
                }
                if e >= 3 {
                    generators.push(UnitGenerator {
                        residue: lift(5),
                        order: pe / 4,
                        prime: 2,
                        exponent: e,
                        kind: GeneratorKind::Five,
                    });
                }
            } else {
                generators.push(UnitGenerator {
                    residue: lift(arith::primitive_root_prime_power(p, e)),
                    order: pe / p * (p - 1),
                    prime: p,
                    exponent: e,
                    kind: GeneratorKind::Cyclic,
                });
            }
        }
        let phi = arith::euler_phi(q);
        debug_assert_eq!(generators.iter().map(|g| g.order).product::<u64>(), phi);
        let exponent = generators.iter().fold(1, |acc, g| arith::lcm(acc, g.order));

        let k = generators.len();
        let mut dlog = vec![NON_UNIT; q as usize * k.max(1)];
        if k == 0 {
            // q ∈ {1, 2}: the group is trivial.
            for n in 0..q {
                if arith::gcd(n, q) == 1 {
                    dlog[n as usize] = 0;
                }
            }
        } else {
            let mut digits = vec![0u64; k];
            let mut value = 1 % q;
            for _ in 0..phi {
                let base = value as usize * k;
                for (slot, &d) in dlog[base..base + k].iter_mut().zip(&digits) {
                    *slot = d as u32;
                }
                // odometer step: multiply by the generator of the digit that
                // advances, divide out the ones that wrap
                for (i, g) in generators.iter().enumerate() {
                    digits[i] += 1;
                    value = arith::mul_mod(value, g.residue, q);
                    if digits[i] < g.order {
                        break;
                    }
                    digits[i] = 0;
                    // g^order = 1, so the wrap needs no correction
                }
            }
        }

        let roots = (0..exponent).map(|j| root_of_unity(j, exponent)).collect();
        Ok(CharacterGroup {
            modulus: q,
            phi,
            generators,
            exponent,
            dlog,
            roots,
        })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Number of characters, φ(q).
    pub fn len(&self) -> u64 {
        self.phi
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn generators(&self) -> &[UnitGenerator] {
        &self.generators
    }

    /// The exponent N of the group; character values are e(j/N).
    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    /// e(j/N) for 0 ≤ j < N.
    #[inline]
    pub fn root(&self, j: u32) -> Complex64 {
        self.roots[j as usize]
    }

    /// Exponent vector of a unit, or `None` for non-units.
    pub fn discrete_log(&self, n: i64) -> Option<Vec<u32>> {
        let r = arith::reduce(n, self.modulus) as usize;
        let k = self.generators.len();
        if k == 0 {
            return (self.dlog[r] != NON_UNIT).then(Vec::new);
        }
        let slice = &self.dlog[r * k..r * k + k];
        (slice[0] != NON_UNIT).then(|| slice.to_vec())
    }

    pub fn character(&self, index: u64) -> Result<DirichletCharacter<'_>> {
        if index >= self.phi {
            return Err(Error::OutOfRange {
                what: "character index",
                value: index,
                min: 0,
                max: self.phi - 1,
            });
        }
        Ok(self.from_exponents(index, self.exponents_of(index)))
    }

    pub fn characters(&self) -> impl Iterator<Item = DirichletCharacter<'_>> + '_ {
        (0..self.phi).map(move |i| self.character(i).expect("index in range"))
    }

    /// Primitive characters, optionally restricted to one parity.
    pub fn primitive_characters(
        &self,
        parity: Option<ParityClass>,
    ) -> impl Iterator<Item = DirichletCharacter<'_>> + '_ {
        (0..self.phi).filter_map(move |i| {
            let exps = self.exponents_of(i);
            if self.conductor_of(&exps) != self.modulus {
                return None;
            }
            let chi = self.from_exponents(i, exps);
            match parity {
                Some(p) if chi.parity_class() != p => None,
                _ => Some(chi),
            }
        })
    }

    fn exponents_of(&self, index: u64) -> Vec<u32> {
        let mut rest = index;
        self.generators
            .iter()
            .map(|g| {
                let c = rest % g.order;
                rest /= g.order;
                c as u32
            })
            .collect()
    }

    fn index_of(&self, exponents: &[u32]) -> u64 {
        let mut index = 0;
        let mut radix = 1;
        for (g, &c) in self.generators.iter().zip(exponents) {
            index += c as u64 * radix;
            radix *= g.order;
        }
        index
    }

    fn from_exponents(&self, index: u64, exponents: Vec<u32>) -> DirichletCharacter<'_> {
        let q = self.modulus as usize;
        let k = self.generators.len();
        let n_exp = self.exponent;
        let weights: Vec<u64> = self
            .generators
            .iter()
            .zip(&exponents)
            .map(|(g, &c)| c as u64 * (n_exp / g.order))
            .collect();
        let mut table = vec![NON_UNIT; q];
        for (r, slot) in table.iter_mut().enumerate() {
            if k == 0 {
                if self.dlog[r] != NON_UNIT {
                    *slot = 0;
                }
                continue;
            }
            let logs = &self.dlog[r * k..r * k + k];
            if logs[0] == NON_UNIT {
                continue;
            }
            let j = logs
                .iter()
                .zip(&weights)
                .fold(0u64, |acc, (&l, &w)| (acc + l as u64 * w) % n_exp);
            *slot = j as u32;
        }
        let minus_one = table[(self.modulus - 1) as usize % q];
        let odd = minus_one != 0 && minus_one != NON_UNIT;
        let conductor = self.conductor_of(&exponents);
        DirichletCharacter {
            group: self,
            index,
            exponents,
            table,
            odd,
            conductor,
        }
    }

    /// Conductor from the exponent vector, one prime power at a time.
    fn conductor_of(&self, exponents: &[u32]) -> u64 {
        let mut conductor = 1u64;
        let mut two_minus_one = 0u32;
        let mut two_five: Option<(u32, u32)> = None; // (c, e)
        for (g, &c) in self.generators.iter().zip(exponents) {
            match g.kind {
                GeneratorKind::Cyclic => {
                    if c != 0 {
                        // trivial on 1 + p^f ℤ iff p^{e−f} | c
                        let v = p_adic_valuation(c as u64, g.prime).min(g.exponent - 1);
                        conductor *= g.prime.pow(g.exponent - v);
                    }
                }
                GeneratorKind::MinusOne => two_minus_one = c,
                GeneratorKind::Five => two_five = Some((c, g.exponent)),
            }
        }
        match two_five {
            Some((c, e)) if c != 0 => {
                let v = p_adic_valuation(c as u64, 2);
                conductor *= 1u64 << (e - v);
            }
            _ => {
                if two_minus_one != 0 {
                    conductor *= 4;
                }
            }
        }
        conductor
    }

    /// Σ over primitive characters of the given parity of χ(a)χ̄(b), by
    /// direct summation. Zero when gcd(ab, q) > 1.
    pub fn ortho_sum(&self, a: i64, b: i64, parity: ParityClass) -> Complex64 {
        let q = self.modulus;
        if arith::gcd_signed(a, q) != 1 || arith::gcd_signed(b, q) != 1 {
            return Complex64::new(0.0, 0.0);
        }
        let mut acc = KahanComplex::new();
        for chi in self.primitive_characters(Some(parity)) {
            acc.add(chi.value(a) * chi.value(b).conj());
        }
        acc.total()
    }
}

/// Least residue mod q that is ≡ g mod pe and ≡ 1 mod q/pe.
fn crt_lift(g: u64, pe: u64, q: u64) -> u64 {
    let rest = q / pe;
    if rest == 1 {
        return g % q;
    }
    // x = 1 + rest·t with rest·t ≡ g − 1 (mod pe)
    let inv = arith::inverse_mod(rest % pe, pe).expect("coprime CRT pieces");
    let t = arith::mul_mod(arith::reduce(g as i64 - 1, pe), inv, pe);
    (1 + rest * t) % q
}

fn p_adic_valuation(mut n: u64, p: u64) -> u32 {
    if n == 0 {
        return u32::MAX;
    }
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

fn root_of_unity(j: u64, n: u64) -> Complex64 {
    // Reduce to the first octant by symmetry so e(j/n) is exact at the
    // quarter points and conjugate-symmetric.
    if 4 * j == n {
        return Complex64::new(0.0, 1.0);
    }
    if 2 * j == n {
        return Complex64::new(-1.0, 0.0);
    }
    if 4 * j == 3 * n {
        return Complex64::new(0.0, -1.0);
    }
    if 2 * j > n {
        return root_of_unity(n - j, n).conj();
    }
    let (s, c) = (2.0 * PI * j as f64 / n as f64).sin_cos();
    Complex64::new(c, s)
}

/// One character of a [`CharacterGroup`], with its value table.
#[derive(Debug, Clone)]
pub struct DirichletCharacter<'g> {
    group: &'g CharacterGroup,
    index: u64,
    exponents: Vec<u32>,
    table: Vec<u32>,
    odd: bool,
    conductor: u64,
}

impl<'g> DirichletCharacter<'g> {
    pub fn modulus(&self) -> u64 {
        self.group.modulus
    }

    pub fn group(&self) -> &'g CharacterGroup {
        self.group
    }

    pub fn index(&self) -> u64 {
        self.index
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    /// 𝔞 ∈ {0, 1} with χ(−1) = (−1)^𝔞.
    pub fn parity(&self) -> u8 {
        self.odd as u8
    }

    pub fn is_odd(&self) -> bool {
        self.odd
    }

    pub fn parity_class(&self) -> ParityClass {
        if self.odd {
            ParityClass::Odd
        } else {
            ParityClass::Even
        }
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn is_primitive(&self) -> bool {
        self.conductor == self.group.modulus
    }

    pub fn is_principal(&self) -> bool {
        self.exponents.iter().all(|&c| c == 0)
    }

    /// Value exponents j (χ(n) = e(j/N)) indexed by residue; [`NON_UNIT`]
    /// off the units.
    pub fn value_exponents(&self) -> &[u32] {
        &self.table
    }

    #[inline]
    pub fn value(&self, n: i64) -> Complex64 {
        let j = self.table[arith::reduce(n, self.group.modulus) as usize];
        if j == NON_UNIT {
            Complex64::new(0.0, 0.0)
        } else {
            self.group.roots[j as usize]
        }
    }

    pub fn conjugate(&self) -> DirichletCharacter<'g> {
        let exps: Vec<u32> = self
            .group
            .generators
            .iter()
            .zip(&self.exponents)
            .map(|(g, &c)| ((g.order - c as u64) % g.order) as u32)
            .collect();
        let index = self.group.index_of(&exps);
        self.group.from_exponents(index, exps)
    }

    /// Pointwise product, as a character of the same group.
    pub fn mul(&self, other: &DirichletCharacter<'g>) -> DirichletCharacter<'g> {
        let exps: Vec<u32> = self
            .group
            .generators
            .iter()
            .zip(self.exponents.iter().zip(&other.exponents))
            .map(|(g, (&a, &b))| ((a as u64 + b as u64) % g.order) as u32)
            .collect();
        let index = self.group.index_of(&exps);
        self.group.from_exponents(index, exps)
    }

    /// Whether χ is trivial on every unit ≡ 1 (mod d), i.e. induced from a
    /// character mod d. Requires d | q.
    pub fn is_induced_from(&self, d: u64) -> bool {
        let q = self.group.modulus;
        debug_assert_eq!(q % d, 0);
        (0..q / d)
            .map(|t| 1 + t * d)
            .filter(|&n| arith::gcd(n, q) == 1)
            .all(|n| self.table[(n % q) as usize] == 0)
    }

    /// τ(χ) = Σ_{x mod q} χ(x) e(x/q), summed directly.
    pub fn gauss_sum(&self) -> Complex64 {
        let q = self.group.modulus;
        let mut acc = KahanComplex::new();
        for x in 0..q {
            let j = self.table[x as usize];
            if j != NON_UNIT {
                acc.add(self.group.roots[j as usize] * root_of_unity(x, q));
            }
        }
        acc.total()
    }
}

/// ½Σ_{d|q, d|a−b} φ(d)μ(q/d) ± ½Σ_{d|q, d|a+b} φ(d)μ(q/d), the closed form
/// of [`CharacterGroup::ortho_sum`].
pub fn ortho_formula(q: u64, a: i64, b: i64, parity: ParityClass) -> Result<Rational64> {
    if arith::gcd_signed(a, q) != 1 || arith::gcd_signed(b, q) != 1 {
        return Err(Error::NotCoprime {
            function: "ortho_formula",
            a: a.checked_mul(b).unwrap_or(a),
            modulus: q,
        });
    }
    let divisor_sum = |m: i64| -> i64 {
        arith::divisors(q)
            .into_iter()
            .filter(|&d| m.rem_euclid(d as i64) == 0)
            .map(|d| arith::euler_phi(d) as i64 * arith::mobius(q / d))
            .sum()
    };
    let minus = divisor_sum(a - b);
    let plus = divisor_sum(a + b);
    Ok(Rational64::new(minus + parity.sign() * plus, 2))
}
