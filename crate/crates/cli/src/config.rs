//! Sweep configuration: a flat `key = value` file merged under the
//! command-line flags.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use recip_core::mellin::Parity;

/// A configuration problem; the CLI exits with status 2.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

fn err<T>(msg: impl Into<String>) -> Result<T, ConfigError> {
    Err(ConfigError(msg.into()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Moment,
    ReciprocityPlus,
    ReciprocityMinus,
    Corollary,
    Bounds,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Moment => "moment",
            Mode::ReciprocityPlus => "reciprocity_plus",
            Mode::ReciprocityMinus => "reciprocity_minus",
            Mode::Corollary => "corollary",
            Mode::Bounds => "bounds",
        }
    }
}

impl FromStr for Mode {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, ConfigError> {
        Ok(match s {
            "moment" => Mode::Moment,
            "reciprocity_plus" => Mode::ReciprocityPlus,
            "reciprocity_minus" => Mode::ReciprocityMinus,
            "corollary" => Mode::Corollary,
            "bounds" => Mode::Bounds,
            _ => return err(format!("unknown mode {s:?}")),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Filter {
    Primes,
    Coprime,
}

impl Filter {
    pub fn as_str(self) -> &'static str {
        match self {
            Filter::Primes => "primes",
            Filter::Coprime => "coprime",
        }
    }
}

impl FromStr for Filter {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, ConfigError> {
        match s {
            "primes" => Ok(Filter::Primes),
            "coprime" | "all" => Ok(Filter::Coprime),
            _ => err(format!("unknown filter {s:?} (expected primes or coprime)")),
        }
    }
}

/// The X of S(q, a; f, X).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum XPolicy {
    EqualsQ,
    Fixed(f64),
}

impl XPolicy {
    pub fn resolve(self, q: u64) -> f64 {
        match self {
            XPolicy::EqualsQ => q as f64,
            XPolicy::Fixed(x) => x,
        }
    }
}

impl fmt::Display for XPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            XPolicy::EqualsQ => f.write_str("=q"),
            XPolicy::Fixed(x) => write!(f, "{x:?}"),
        }
    }
}

impl FromStr for XPolicy {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, ConfigError> {
        if s == "=q" || s == "q" {
            return Ok(XPolicy::EqualsQ);
        }
        match s.parse::<f64>() {
            Ok(x) if x > 0.0 && x.is_finite() => Ok(XPolicy::Fixed(x)),
            _ => err(format!("x must be \"=q\" or a positive number, got {s:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

/// The moduli of a sweep: an inclusive range or an explicit list.
#[derive(Debug, Clone, PartialEq)]
pub enum Moduli {
    Range { min: u64, max: u64 },
    List(Vec<u64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub mode: Mode,
    pub moduli: Moduli,
    pub filter: Filter,
    pub a_list: Vec<u64>,
    pub x: XPolicy,
    /// Kernel for the reciprocity modes; defaults to V₊ / V₋ by sign.
    pub parity: Option<Parity>,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub workers: usize,
    pub seed: u64,
}

/// Sweep settings as given, before defaults. Flags and file entries both
/// land here; [`SweepSettings::overlay`] lets the flags win.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SweepSettings {
    pub mode: Option<String>,
    pub q_min: Option<u64>,
    pub q_max: Option<u64>,
    pub q_list: Option<String>,
    pub filter: Option<String>,
    pub a: Option<String>,
    pub x: Option<String>,
    pub parity: Option<String>,
    pub format: Option<String>,
    pub out: Option<PathBuf>,
    pub workers: Option<usize>,
    pub seed: Option<u64>,
}

const KEYS: [&str; 12] = [
    "mode", "q_min", "q_max", "q_list", "filter", "a", "x", "parity", "format", "out", "workers",
    "seed",
];

impl SweepSettings {
    /// Parses `key = value` lines; `#` starts a comment.
    pub fn parse_file_contents(text: &str) -> Result<Self, ConfigError> {
        let mut entries = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return err(format!("config line {}: expected key = value", lineno + 1));
            };
            let key = key.trim().replace('-', "_");
            if !KEYS.contains(&key.as_str()) {
                return err(format!("config line {}: unknown key {key:?}", lineno + 1));
            }
            if entries
                .insert(key.clone(), value.trim().to_string())
                .is_some()
            {
                return err(format!("config line {}: duplicate key {key:?}", lineno + 1));
            }
        }
        let take = |k: &str| entries.get(k).cloned();
        let number = |k: &str| -> Result<Option<u64>, ConfigError> {
            take(k)
                .map(|v| {
                    v.parse().map_err(|_| {
                        ConfigError(format!("{k} = {v:?} is not a non-negative integer"))
                    })
                })
                .transpose()
        };
        Ok(SweepSettings {
            mode: take("mode"),
            q_min: number("q_min")?,
            q_max: number("q_max")?,
            q_list: take("q_list"),
            filter: take("filter"),
            a: take("a"),
            x: take("x"),
            parity: take("parity"),
            format: take("format"),
            out: take("out").map(PathBuf::from),
            workers: number("workers")?.map(|w| w as usize),
            seed: number("seed")?,
        })
    }

    pub fn from_file(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse_file_contents(&text)
    }

    /// `self` with every unset field taken from `base`.
    pub fn overlay(self, base: SweepSettings) -> SweepSettings {
        SweepSettings {
            mode: self.mode.or(base.mode),
            q_min: self.q_min.or(base.q_min),
            q_max: self.q_max.or(base.q_max),
            q_list: self.q_list.or(base.q_list),
            filter: self.filter.or(base.filter),
            a: self.a.or(base.a),
            x: self.x.or(base.x),
            parity: self.parity.or(base.parity),
            format: self.format.or(base.format),
            out: self.out.or(base.out),
            workers: self.workers.or(base.workers),
            seed: self.seed.or(base.seed),
        }
    }

    pub fn resolve(self) -> Result<SweepConfig, ConfigError> {
        let mode: Mode = match &self.mode {
            Some(m) => m.parse()?,
            None => return err("sweep needs a mode"),
        };
        let moduli = match (&self.q_list, self.q_min, self.q_max) {
            (Some(list), None, None) => {
                let qs = parse_list(list, "q_list")?;
                if qs.is_empty() {
                    return err("q_list is empty");
                }
                Moduli::List(qs)
            }
            (Some(_), _, _) => return err("give either q_list or q_min/q_max, not both"),
            (None, Some(min), Some(max)) => {
                if min > max {
                    return err(format!("empty modulus range [{min}, {max}]"));
                }
                Moduli::Range { min, max }
            }
            (None, _, _) => return err("sweep needs q_min and q_max, or q_list"),
        };
        let filter = match &self.filter {
            Some(f) => f.parse()?,
            None => match mode {
                Mode::Moment | Mode::Corollary | Mode::ReciprocityPlus | Mode::ReciprocityMinus => {
                    Filter::Primes
                }
                Mode::Bounds => Filter::Coprime,
            },
        };
        let a_list = match &self.a {
            Some(a) => parse_list(a, "a")?,
            None => return err("sweep needs a (comma-separated list)"),
        };
        if a_list.is_empty() || a_list.contains(&0) {
            return err("a must be a nonempty list of positive integers");
        }
        let x = match &self.x {
            Some(x) => x.parse()?,
            None => XPolicy::EqualsQ,
        };
        let parity = match &self.parity {
            Some(p) => Some(
                p.parse::<Parity>()
                    .map_err(|e| ConfigError(e.to_string()))?,
            ),
            None => None,
        };
        let format = match self.format.as_deref() {
            None | Some("csv") => Format::Csv,
            Some("json") => Format::Json,
            Some(other) => return err(format!("unknown format {other:?}")),
        };
        let workers = self.workers.unwrap_or_else(|| {
            std::thread::available_parallelism()
                .map(|n| n.get())
                .unwrap_or(1)
        });
        if workers == 0 {
            return err("workers must be at least 1");
        }
        Ok(SweepConfig {
            mode,
            moduli,
            filter,
            a_list,
            x,
            parity,
            format,
            out: self.out,
            workers,
            seed: self.seed.unwrap_or(0),
        })
    }
}

fn parse_list(text: &str, what: &str) -> Result<Vec<u64>, ConfigError> {
    text.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<u64>()
                .map_err(|_| ConfigError(format!("{what}: {t:?} is not a non-negative integer")))
        })
        .collect()
}
