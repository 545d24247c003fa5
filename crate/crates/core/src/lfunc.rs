//! Central values of Dirichlet L-functions, two ways.
//!
//! The Hurwitz path evaluates L(s, χ) = q^{-s} Σ_a χ(a) ζ(s, a/q) from a
//! per-modulus table. The AFE path evaluates |L(½, χ)|² as the smoothed
//! double sum 2 Σ_{m,n} χ(m) χ̄(n) (mn)^{-½} V_𝔞(mn/q), grouped by the
//! residue of m·n⁻¹ so one table serves every character of a modulus.

use num_complex::Complex64;

use crate::arith;
use crate::characters::{DirichletCharacter, NON_UNIT};
use crate::error::{Error, Result};
use crate::mellin::{KernelFamily, Parity, SmoothingKernel, Truncation};
use crate::specfun::{hurwitz_zeta_regular, hurwitz_zeta_with_estimate};

/// Bound on the discarded tail of every smoothed sum.
pub const TAIL_TARGET: f64 = 1e-12;

const AFE_BLOCK: u64 = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Afe,
    Hurwitz,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Afe => "afe",
            Method::Hurwitz => "hurwitz",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CentralValue {
    pub modulus: u64,
    pub chi_index: u64,
    /// L(s, χ) for the Hurwitz path; |L(½, χ)|² (real) for the AFE path.
    pub value: Complex64,
    pub method: Method,
    pub err_estimate: f64,
}

/// ζ(s, a/q) − 1/(s−1) for a = 1..q, shared by all characters mod q.
#[derive(Debug, Clone)]
pub struct HurwitzTable {
    modulus: u64,
    s: Complex64,
    regular: Vec<Complex64>,
    /// Change in ζ(s, a/q) when the Euler–Maclaurin length is doubled.
    deltas: Vec<f64>,
    q_pow: Complex64,
}

impl HurwitzTable {
    pub fn new(q: u64, s: Complex64) -> Result<Self> {
        if q == 0 {
            return Err(Error::domain("hurwitz_table", "modulus must be positive"));
        }
        let near_one = (s - 1.0).norm() < 1e-9;
        let mut regular = Vec::with_capacity(q as usize);
        let mut deltas = Vec::with_capacity(q as usize);
        for a in 1..=q {
            let alpha = a as f64 / q as f64;
            regular.push(hurwitz_zeta_regular(s, alpha)?);
            let delta = if near_one {
                0.0
            } else {
                hurwitz_zeta_with_estimate(s, alpha)?.1
            };
            deltas.push(delta);
        }
        Ok(HurwitzTable {
            modulus: q,
            s,
            regular,
            deltas,
            q_pow: (-s * (q as f64).ln()).exp(),
        })
    }

    pub fn central(q: u64) -> Result<Self> {
        Self::new(q, Complex64::new(0.5, 0.0))
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// L(s, χ) for a character of this modulus.
    pub fn l_value(&self, chi: &DirichletCharacter<'_>) -> Result<CentralValue> {
        if chi.modulus() != self.modulus {
            return Err(Error::domain(
                "l_value",
                format!(
                    "character mod {} used with a table mod {}",
                    chi.modulus(),
                    self.modulus
                ),
            ));
        }
        let principal = chi.is_principal();
        if principal && (self.s - 1.0).norm() < 1e-9 {
            return Err(Error::PoleProximity {
                function: "l_value",
                at: format!("{}", self.s),
                distance: (self.s - 1.0).norm(),
            });
        }
        let group = chi.group();
        let exps = chi.value_exponents();
        let mut acc = arith::KahanComplex::new();
        let mut err = 0.0;
        for (a, (&z, &d)) in (1..=self.modulus).zip(self.regular.iter().zip(&self.deltas)) {
            let j = exps[(a % self.modulus) as usize];
            if j == NON_UNIT {
                continue;
            }
            acc.add(group.root(j) * z);
            err += d + f64::EPSILON * z.norm();
        }
        let mut total = acc.total();
        if principal {
            total += group.len() as f64 / (self.s - 1.0);
        }
        Ok(CentralValue {
            modulus: self.modulus,
            chi_index: chi.index(),
            value: self.q_pow * total,
            method: Method::Hurwitz,
            err_estimate: self.q_pow.norm() * err,
        })
    }
}

/// L(s, χ) via Hurwitz zeta. Builds a one-off table; reuse a
/// [`HurwitzTable`] when evaluating many characters.
pub fn l_value_hurwitz(chi: &DirichletCharacter<'_>, s: Complex64) -> Result<CentralValue> {
    HurwitzTable::new(chi.modulus(), s)?.l_value(chi)
}

/// L(½, χ) via Hurwitz zeta.
pub fn l_central_hurwitz(chi: &DirichletCharacter<'_>) -> Result<CentralValue> {
    l_value_hurwitz(chi, Complex64::new(0.5, 0.0))
}

/// T(r) = Σ (mn)^{-½} V(mn/q) over pairs of units with m ≡ r·n (mod q),
/// for one modulus and one kernel.
#[derive(Debug, Clone)]
pub struct AfeTable {
    modulus: u64,
    parity: Parity,
    by_ratio: Vec<f64>,
    truncation: Truncation,
}

impl AfeTable {
    pub fn new(q: u64, kernel: &SmoothingKernel) -> Self {
        let qf = q as f64;
        let truncation = kernel.truncation(qf, 1.0, TAIL_TARGET);
        let limit = (qf * truncation.tau).floor() as u64;
        let qs = q as usize;
        let inverse: Vec<u64> = (0..q)
            .map(|n| arith::inverse_mod(n, q).unwrap_or(u64::MAX))
            .collect();
        let mut by_ratio = vec![0.0; qs];
        // The weight depends on k = mn only, so evaluate it once per k,
        // a block at a time, and stream the pairs through each block.
        let mut weights = vec![0.0; AFE_BLOCK as usize];
        let mut k0 = 1u64;
        while k0 <= limit {
            let k1 = (k0 + AFE_BLOCK).min(limit + 1);
            for (k, w) in (k0..k1).zip(weights.iter_mut()) {
                let kf = k as f64;
                *w = kernel.value(kf / qf) / kf.sqrt();
            }
            let mut m = 1u64;
            while m * m < k1 {
                let m_res = m % q;
                let m_inv = inverse[m_res as usize];
                if m_inv == u64::MAX {
                    m += 1;
                    continue;
                }
                let n_lo = m.max(k0.div_ceil(m));
                let n_hi = (k1 - 1) / m;
                let mut n_res = n_lo % q;
                for n in n_lo..=n_hi {
                    let n_inv = inverse[n_res as usize];
                    if n_inv != u64::MAX {
                        let w = weights[(m * n - k0) as usize];
                        by_ratio[(m_res * n_inv % q) as usize] += w;
                        if n != m {
                            by_ratio[(n_res * m_inv % q) as usize] += w;
                        }
                    }
                    n_res += 1;
                    if n_res == q {
                        n_res = 0;
                    }
                }
                m += 1;
            }
            k0 = k1;
        }
        AfeTable {
            modulus: q,
            parity: kernel.parity(),
            by_ratio,
            truncation,
        }
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn truncation(&self) -> Truncation {
        self.truncation
    }

    /// T(r); zero when r is not a unit.
    pub fn ratio_sum(&self, r: u64) -> f64 {
        self.by_ratio[(r % self.modulus) as usize]
    }

    /// 2 Σ_r χ(r) T(r). Only meaningful for characters whose parity matches
    /// the kernel's; [`l_central_afe`] enforces that.
    pub fn central_square(&self, chi: &DirichletCharacter<'_>) -> CentralValue {
        let group = chi.group();
        let exps = chi.value_exponents();
        let mut acc = arith::KahanComplex::new();
        let mut mass = 0.0;
        for (r, &t) in self.by_ratio.iter().enumerate() {
            let j = exps[r];
            if j == NON_UNIT {
                continue;
            }
            acc.add(group.root(j) * t);
            mass += t.abs();
        }
        let value = 2.0 * acc.total();
        CentralValue {
            modulus: self.modulus,
            chi_index: chi.index(),
            value,
            method: Method::Afe,
            err_estimate: 2.0 * self.truncation.tail_bound + 4.0 * f64::EPSILON * mass.max(1.0),
        }
    }
}

fn check_primitive(chi: &DirichletCharacter<'_>) -> Result<()> {
    if !chi.is_primitive() {
        return Err(Error::NotPrimitive {
            modulus: chi.modulus(),
            conductor: chi.conductor(),
        });
    }
    Ok(())
}

/// |L(½, χ)|² from the approximate functional equation with the kernel
/// V_𝔞 matching χ(−1) = (−1)^𝔞.
pub fn l_central_afe(chi: &DirichletCharacter<'_>, family: &KernelFamily) -> Result<CentralValue> {
    check_primitive(chi)?;
    let kernel = family.kernel(Parity::for_character(chi.is_odd()));
    Ok(AfeTable::new(chi.modulus(), kernel).central_square(chi))
}

/// As [`l_central_afe`] but with an explicitly chosen kernel, which lets
/// tests confirm that the parity dispatch matters.
pub fn l_central_afe_with_kernel(
    chi: &DirichletCharacter<'_>,
    kernel: &SmoothingKernel,
) -> Result<CentralValue> {
    check_primitive(chi)?;
    Ok(AfeTable::new(chi.modulus(), kernel).central_square(chi))
}
