//! Verification suites: each returns checks with a measured value and the
//! threshold it is held to.

use std::fmt;
use std::str::FromStr;

use serde_json::{json, Value};

use recip_core::arith;
use recip_core::characters::{ortho_formula, CharacterGroup, ParityClass};
use recip_core::lfunc::{AfeTable, HurwitzTable};
use recip_core::mellin::{KernelFamily, Parity};
use recip_core::reciprocity::{constant_chain, moment_bruteforce, moment_via_sums};
use recip_core::sums::{bound_prop5, count_s, count_s_mn, naive, random_count_instances};

use crate::config::ConfigError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Orthogonality,
    Bounds,
    Lemma4,
    Constants,
    Afe,
}

impl Suite {
    pub fn as_str(self) -> &'static str {
        match self {
            Suite::Orthogonality => "orthogonality",
            Suite::Bounds => "bounds",
            Suite::Lemma4 => "lemma4",
            Suite::Constants => "constants",
            Suite::Afe => "afe",
        }
    }
}

impl FromStr for Suite {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, ConfigError> {
        Ok(match s {
            "orthogonality" => Suite::Orthogonality,
            "bounds" => Suite::Bounds,
            "lemma4" => Suite::Lemma4,
            "constants" => Suite::Constants,
            "afe" => Suite::Afe,
            _ => return Err(ConfigError(format!("unknown suite {s:?}"))),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    /// measured ≤ threshold
    AtMost,
    /// measured ≥ threshold
    AtLeast,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub measured: f64,
    pub threshold: f64,
    pub relation: Relation,
}

impl Check {
    pub fn at_most(name: impl Into<String>, measured: f64, threshold: f64) -> Self {
        Check {
            name: name.into(),
            measured,
            threshold,
            relation: Relation::AtMost,
        }
    }

    pub fn at_least(name: impl Into<String>, measured: f64, threshold: f64) -> Self {
        Check {
            name: name.into(),
            measured,
            threshold,
            relation: Relation::AtLeast,
        }
    }

    /// NaN never passes.
    pub fn passed(&self) -> bool {
        match self.relation {
            Relation::AtMost => self.measured <= self.threshold,
            Relation::AtLeast => self.measured >= self.threshold,
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "name": self.name,
            "pass": self.passed(),
            "measured": self.measured,
            "threshold": self.threshold,
            "relation": match self.relation { Relation::AtMost => "<=", Relation::AtLeast => ">=" },
        })
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = match self.relation {
            Relation::AtMost => "<=",
            Relation::AtLeast => ">=",
        };
        write!(
            f,
            "{} {} measured={:e} threshold{op}{:e}",
            if self.passed() { "PASS" } else { "FAIL" },
            self.name,
            self.measured,
            self.threshold
        )
    }
}

#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    pub qmax: u64,
    pub trials: usize,
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            qmax: 50,
            trials: 1000,
            seed: 0,
        }
    }
}

pub fn run(
    suite: Suite,
    opts: &VerifyOptions,
    family: &KernelFamily,
) -> recip_core::Result<Vec<Check>> {
    match suite {
        Suite::Orthogonality => orthogonality(opts.qmax),
        Suite::Bounds => Ok(bounds(opts.seed, opts.trials)),
        Suite::Lemma4 => lemma4(&[11, 101, 211], &[2, 3, 7], family),
        Suite::Constants => constants(family),
        Suite::Afe => afe(&[5, 7, 11, 101], family),
    }
}

/// Direct character sums against the divisor-sum closed form, for every
/// modulus up to `qmax` and every coprime pair.
pub fn orthogonality(qmax: u64) -> recip_core::Result<Vec<Check>> {
    let mut worst = [0.0f64; 2];
    for q in 1..=qmax {
        let group = CharacterGroup::new(q)?;
        let units: Vec<i64> = (1..=q as i64)
            .filter(|&a| arith::gcd_signed(a, q) == 1)
            .collect();
        for (slot, parity) in [ParityClass::Even, ParityClass::Odd]
            .into_iter()
            .enumerate()
        {
            for &a in &units {
                for &b in &units {
                    let direct = group.ortho_sum(a, b, parity);
                    let exact = ortho_formula(q, a, b, parity)?;
                    let exact = *exact.numer() as f64 / *exact.denom() as f64;
                    let diff = (direct.re - exact).abs().max(direct.im.abs());
                    worst[slot] = worst[slot].max(diff);
                }
            }
        }
    }
    Ok(vec![
        Check::at_most(format!("orthogonality even q<={qmax}"), worst[0], 1e-9),
        Check::at_most(format!("orthogonality odd q<={qmax}"), worst[1], 1e-9),
    ])
}

/// Lattice-point bounds on seeded random instances, with exact counts
/// checked against the naive loops.
pub fn bounds(seed: u64, trials: usize) -> Vec<Check> {
    let mut mismatches = 0u64;
    let mut slack = [f64::INFINITY; 3];
    for inst in random_count_instances(seed, trials, 1000, 1e4) {
        let (q, a) = (inst.q, inst.a);
        let hyper = count_s(q, a, inst.x).expect("instances satisfy the preconditions");
        let boxed = count_s_mn(q, a, inst.m, inst.n).expect("instances satisfy the preconditions");
        let prop5 = bound_prop5(q, a, inst.x).expect("instances satisfy the preconditions");
        if hyper.count != naive::count_s(q, a as u64, inst.x) {
            mismatches += 1;
        }
        if boxed.count != naive::count_s_mn(q, a as u64, inst.m, inst.n) {
            mismatches += 1;
        }
        slack[0] = slack[0].min(hyper.slack);
        slack[1] = slack[1].min(boxed.slack);
        slack[2] = slack[2].min(prop5.slack);
    }
    vec![
        Check::at_most(
            format!("count mismatches ({trials} instances)"),
            mismatches as f64,
            0.0,
        ),
        Check::at_least("hyperbola bound min slack", slack[0], 0.0),
        Check::at_least("box bound min slack", slack[1], 0.0),
        Check::at_least("prop5 bound min slack", slack[2], 0.0),
    ]
}

/// The moment assembled from congruence sums against direct summation.
pub fn lemma4(
    primes: &[u64],
    twists: &[i64],
    family: &KernelFamily,
) -> recip_core::Result<Vec<Check>> {
    let mut checks = Vec::new();
    for &p in primes {
        for &h in twists {
            if arith::gcd_signed(h, p) != 1 {
                continue;
            }
            let brute = moment_bruteforce(p, h)?;
            let sums = moment_via_sums(p, h, family)?;
            checks.push(Check::at_most(
                format!("moment p={p} h={h}"),
                (brute.value - sums.value).abs(),
                1e-6,
            ));
        }
    }
    Ok(checks)
}

pub fn constants(family: &KernelFamily) -> recip_core::Result<Vec<Check>> {
    let c = constant_chain(family)?;
    Ok(vec![
        Check::at_most(
            format!("2c1+={:.12} vs 1", c.two_c1),
            (c.two_c1 - 1.0).abs(),
            1e-10,
        ),
        Check::at_most(
            format!(
                "2c2+={:.12} vs gamma-log(8pi)={:.12}",
                c.two_c2, c.a_constant
            ),
            (c.two_c2 - c.a_constant).abs(),
            1e-8,
        ),
        Check::at_most(
            format!(
                "2(k+(1)+k-(1))={:.12} vs zeta(1/2)^2={:.12}",
                c.two_c3, c.zeta_half_sq
            ),
            (c.two_c3 - c.zeta_half_sq).abs(),
            1e-8,
        ),
    ])
}

/// |L(½, χ)|² from the approximate functional equation against Hurwitz
/// zeta, worst case per modulus over all primitive characters.
pub fn afe(moduli: &[u64], family: &KernelFamily) -> recip_core::Result<Vec<Check>> {
    let mut checks = Vec::new();
    for &q in moduli {
        let group = CharacterGroup::new(q)?;
        let hurwitz = HurwitzTable::central(q)?;
        let even = AfeTable::new(q, family.kernel(Parity::Even));
        let odd = AfeTable::new(q, family.kernel(Parity::Odd));
        let mut worst = 0.0f64;
        for chi in group.primitive_characters(None) {
            let table = if chi.is_odd() { &odd } else { &even };
            let afe = table.central_square(&chi);
            let l = hurwitz.l_value(&chi)?;
            worst = worst
                .max((afe.value.re - l.value.norm_sqr()).abs())
                .max(afe.value.im.abs());
        }
        checks.push(Check::at_most(format!("afe vs hurwitz q={q}"), worst, 1e-8));
    }
    Ok(checks)
}
