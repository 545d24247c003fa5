//! Parameter sweeps: one report row per (modulus, twist) cell.

use rayon::prelude::*;
use serde_json::{json, Value};

use recip_core::arith;
use recip_core::mellin::{KernelFamily, Parity};
use recip_core::reciprocity::{
    corollary_bound, corollary_residual, general_modulus_moment, moment_bruteforce,
    moment_bruteforce_general, moment_via_sums, reciprocity_minus, reciprocity_plus,
    GENERAL_MAX_MODULUS,
};
use recip_core::sums::{bound_prop5, count_s};

use crate::config::{ConfigError, Filter, Mode, Moduli, SweepConfig};
use crate::report::{Cell, Table};

pub fn columns(mode: Mode) -> Vec<&'static str> {
    match mode {
        Mode::Moment => vec!["p", "h", "bruteforce", "sums", "difference", "err_estimate"],
        Mode::ReciprocityPlus | Mode::ReciprocityMinus => {
            vec![
                "q",
                "a",
                "lhs",
                "dual",
                "term_c1_c2",
                "term_k",
                "residual",
                "bound",
            ]
        }
        Mode::Corollary => vec![
            "p",
            "h",
            "moment",
            "dual_moment",
            "main",
            "residual_precise",
            "residual_headline",
            "residual_printed",
            "bound",
        ],
        Mode::Bounds => vec![
            "q",
            "a",
            "x",
            "count",
            "count_rhs",
            "count_slack",
            "prop5_rhs",
            "prop5_slack",
        ],
    }
}

fn moduli(cfg: &SweepConfig) -> Vec<u64> {
    let mut qs: Vec<u64> = match &cfg.moduli {
        Moduli::Range { min, max } => (*min..=*max).collect(),
        Moduli::List(list) => list.clone(),
    };
    qs.sort_unstable();
    qs.dedup();
    if cfg.filter == Filter::Primes {
        qs.retain(|&q| arith::is_prime(q));
    }
    qs
}

fn admissible(mode: Mode, q: u64, a: u64) -> bool {
    let coprime = arith::gcd(a, q) == 1;
    match mode {
        Mode::Moment => coprime && q >= 2,
        Mode::ReciprocityPlus | Mode::ReciprocityMinus | Mode::Bounds => coprime && a < q,
        Mode::Corollary => a < q && arith::is_prime(q) && arith::is_prime(a),
    }
}

/// The cells of a sweep in lexicographic order of (modulus, twist).
pub fn cells(cfg: &SweepConfig) -> Result<Vec<(u64, u64)>, ConfigError> {
    let qs = moduli(cfg);
    if qs.is_empty() {
        return Err(ConfigError(
            "the modulus range is empty after filtering".into(),
        ));
    }
    let mut a_list = cfg.a_list.clone();
    a_list.sort_unstable();
    a_list.dedup();
    let cells: Vec<(u64, u64)> = qs
        .iter()
        .flat_map(|&q| a_list.iter().map(move |&a| (q, a)))
        .filter(|&(q, a)| admissible(cfg.mode, q, a))
        .collect();
    if cells.is_empty() {
        return Err(ConfigError(format!(
            "no (modulus, a) pair satisfies the {} preconditions",
            cfg.mode.as_str()
        )));
    }
    if cfg.mode == Mode::Moment {
        if let Some(&(q, _)) = cells
            .iter()
            .find(|&&(q, _)| !arith::is_prime(q) && q > GENERAL_MAX_MODULUS)
        {
            return Err(ConfigError(format!(
                "composite modulus {q} exceeds {GENERAL_MAX_MODULUS} for the divisor-sum moment"
            )));
        }
    }
    Ok(cells)
}

fn row(cfg: &SweepConfig, family: &KernelFamily, q: u64, a: u64) -> recip_core::Result<Vec<Cell>> {
    let x = cfg.x.resolve(q);
    Ok(match cfg.mode {
        Mode::Moment => {
            let h = a as i64;
            let (brute, sums) = if arith::is_prime(q) {
                (moment_bruteforce(q, h)?, moment_via_sums(q, h, family)?)
            } else {
                (
                    moment_bruteforce_general(q, h)?,
                    general_modulus_moment(q, h, family)?,
                )
            };
            vec![
                q.into(),
                h.into(),
                brute.value.into(),
                sums.value.into(),
                (brute.value - sums.value).into(),
                (brute.err_estimate + sums.err_estimate).into(),
            ]
        }
        Mode::ReciprocityPlus | Mode::ReciprocityMinus => {
            let plus = cfg.mode == Mode::ReciprocityPlus;
            let default = if plus { Parity::Plus } else { Parity::Minus };
            let kernel = family.kernel(cfg.parity.unwrap_or(default));
            let r = if plus {
                reciprocity_plus(q, a, Some(x), kernel)?
            } else {
                reciprocity_minus(q, a, Some(x), kernel)?
            };
            vec![
                q.into(),
                a.into(),
                r.lhs.into(),
                r.dual.into(),
                r.term_c1_c2.into(),
                r.term_k.into(),
                r.residual.into(),
                r.bound.into(),
            ]
        }
        Mode::Corollary => {
            let t = corollary_residual(q, a)?;
            vec![
                q.into(),
                a.into(),
                t.moment.value.into(),
                t.dual_moment.value.into(),
                t.main.into(),
                t.residual_precise.into(),
                t.residual_headline.into(),
                t.residual_printed.into(),
                corollary_bound(q, a).into(),
            ]
        }
        Mode::Bounds => {
            let c = count_s(q, a as i64, x)?;
            let p5 = bound_prop5(q, a as i64, x)?;
            vec![
                q.into(),
                a.into(),
                x.into(),
                c.count.into(),
                c.bound_rhs.into(),
                c.slack.into(),
                p5.rhs.into(),
                p5.slack.into(),
            ]
        }
    })
}

/// Evaluates every cell on a pool of `cfg.workers` threads. Rows come back
/// in cell order whatever the scheduling.
pub fn run(cfg: &SweepConfig, family: &KernelFamily) -> Result<Table, SweepError> {
    let cells = cells(cfg).map_err(SweepError::Config)?;
    // Build the kernels before fanning out; workers only read them.
    for parity in [Parity::Plus, Parity::Minus] {
        family.kernel(parity);
    }
    if let Some(p) = cfg.parity {
        family.kernel(p);
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| SweepError::Runtime(e.to_string()))?;
    let rows = pool
        .install(|| {
            cells
                .par_iter()
                .map(|&(q, a)| row(cfg, family, q, a))
                .collect::<recip_core::Result<Vec<_>>>()
        })
        .map_err(|e| SweepError::Config(ConfigError(e.to_string())))?;
    Ok(Table {
        columns: columns(cfg.mode),
        rows,
    })
}

#[derive(Debug)]
pub enum SweepError {
    Config(ConfigError),
    Runtime(String),
}

/// The settings that determine a report's contents. Worker count and
/// output path are left out so they cannot change the bytes.
pub fn config_json(cfg: &SweepConfig) -> Value {
    let moduli = match &cfg.moduli {
        Moduli::Range { min, max } => json!({"min": min, "max": max}),
        Moduli::List(list) => json!(list),
    };
    json!({
        "mode": cfg.mode.as_str(),
        "moduli": moduli,
        "filter": cfg.filter.as_str(),
        "a": cfg.a_list,
        "x": cfg.x.to_string(),
        "parity": cfg.parity.map(|p| p.as_str()),
        "seed": cfg.seed,
    })
}
