//! Single-shot evaluations.

use serde_json::{json, Map, Value};

use recip_core::arith;
use recip_core::characters::CharacterGroup;
use recip_core::lfunc::l_central_hurwitz;
use recip_core::mellin::{KernelFamily, Parity};
use recip_core::reciprocity::{moment_bruteforce, moment_bruteforce_general};
use recip_core::sums::smooth_s;

/// Named values in print order; `value` and `err_estimate` always present.
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub what: &'static str,
    pub fields: Vec<(&'static str, Value)>,
}

impl Evaluation {
    fn new(what: &'static str, value: f64, err_estimate: f64) -> Self {
        Evaluation {
            what,
            fields: vec![("value", num(value)), ("err_estimate", num(err_estimate))],
        }
    }

    fn with(mut self, key: &'static str, v: Value) -> Self {
        self.fields.push((key, v));
        self
    }

    pub fn to_json(&self) -> Value {
        let mut obj = Map::new();
        obj.insert("what".into(), json!(self.what));
        for (k, v) in &self.fields {
            obj.insert((*k).into(), v.clone());
        }
        Value::Object(obj)
    }

    /// One `key=value` per line.
    pub fn to_text(&self) -> String {
        self.fields
            .iter()
            .map(|(k, v)| match v {
                Value::Number(n) if n.is_f64() => format!("{k}={:?}\n", n.as_f64().unwrap()),
                Value::String(s) => format!("{k}={s}\n"),
                other => format!("{k}={other}\n"),
            })
            .collect()
    }
}

fn num(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
}

/// Σ over primitive χ mod p of |L(½,χ)|² χ(h), summed directly.
pub fn moment(p: u64, h: i64) -> recip_core::Result<Evaluation> {
    let rec = if arith::is_prime(p) {
        moment_bruteforce(p, h)?
    } else {
        moment_bruteforce_general(p, h)?
    };
    Ok(Evaluation::new("moment", rec.value, rec.err_estimate)
        .with("imag", num(rec.imag))
        .with("method", json!(rec.method.as_str())))
}

pub fn ssum(
    q: u64,
    a: i64,
    x: f64,
    parity: Parity,
    family: &KernelFamily,
) -> recip_core::Result<Evaluation> {
    let s = smooth_s(q, a, family.kernel(parity), x)?;
    Ok(Evaluation::new("ssum", s.value, s.truncation.tail_bound)
        .with("pairs", json!(s.pairs))
        .with("tau", num(s.truncation.tau)))
}

/// L(½, χ) for the character with the given index in the group mod q.
pub fn lvalue(q: u64, index: u64) -> recip_core::Result<Evaluation> {
    let group = CharacterGroup::new(q)?;
    let chi = group.character(index)?;
    let l = l_central_hurwitz(&chi)?;
    Ok(Evaluation::new("lvalue", l.value.re, l.err_estimate)
        .with("imag", num(l.value.im))
        .with("abs_squared", num(l.value.norm_sqr()))
        .with("conductor", json!(chi.conductor()))
        .with("odd", json!(chi.is_odd())))
}

pub fn kfun(y: f64, parity: Parity, family: &KernelFamily) -> recip_core::Result<Evaluation> {
    let kernel = family.kernel(parity);
    let v = kernel.k(y)?;
    Ok(Evaluation::new("kfun", v, kernel.contour().tail_bound()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn moment_text_lists_value_first() {
        let e = moment(11, 2).unwrap();
        let text = e.to_text();
        assert!(text.starts_with("value="));
        assert!(text.contains("method=bruteforce"), "{text}");
    }
}
