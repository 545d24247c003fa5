use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use recip_cli::config::{ConfigError, Format, SweepSettings};
use recip_cli::eval::{self, Evaluation};
use recip_cli::report::{self, suite_versions};
use recip_cli::sweep::{self, SweepError};
use recip_cli::verify::{self, Suite, VerifyOptions};
use recip_core::mellin::{KernelFamily, Parity};

#[derive(Parser)]
#[command(
    name = "recip",
    version,
    about = "Twisted second moments of Dirichlet L-functions and reciprocity checks"
)]
struct Cli {
    /// Machine-readable output
    #[arg(long, global = true)]
    json: bool,
    /// Seed for randomized checks
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads for sweeps
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// `key = value` settings file; flags take precedence
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Write the report here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite: orthogonality, bounds, lemma4, constants or afe
    Verify {
        suite: String,
        #[arg(long, default_value_t = 50)]
        qmax: u64,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
    },
    /// Evaluate one report row per (modulus, twist) cell
    Sweep(SweepArgs),
    /// Evaluate a single quantity
    #[command(subcommand)]
    Eval(EvalCommand),
}

#[derive(Args)]
struct SweepArgs {
    /// moment, reciprocity_plus, reciprocity_minus, corollary or bounds
    #[arg(long)]
    mode: Option<String>,
    #[arg(long)]
    q_min: Option<u64>,
    #[arg(long)]
    q_max: Option<u64>,
    /// Comma-separated moduli, instead of a range
    #[arg(long)]
    q_list: Option<String>,
    /// primes or coprime
    #[arg(long)]
    filter: Option<String>,
    /// Comma-separated twists a (or h)
    #[arg(long)]
    a: Option<String>,
    /// "=q" or a positive number
    #[arg(long, allow_hyphen_values = true)]
    x: Option<String>,
    /// Kernel for the reciprocity modes
    #[arg(long)]
    parity: Option<String>,
    /// csv or json
    #[arg(long)]
    format: Option<String>,
}

#[derive(Subcommand)]
#[command(allow_negative_numbers = true)]
enum EvalCommand {
    /// Σ over primitive χ mod p of |L(½,χ)|²χ(h)
    Moment { p: u64, h: i64 },
    /// S(q, a; V, X)
    #[command(allow_negative_numbers = true)]
    Ssum {
        q: u64,
        a: i64,
        x: f64,
        parity: String,
    },
    /// L(½, χ) for the character of the given index mod q
    Lvalue { q: u64, chi: u64 },
    /// k(y) for the plus or minus kernel
    #[command(allow_negative_numbers = true)]
    Kfun { y: f64, parity: String },
}

enum Failure {
    Config(String),
    Runtime(String),
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Config(e.0)
    }
}

impl From<recip_core::Error> for Failure {
    fn from(e: recip_core::Error) -> Self {
        Failure::Config(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn file_settings(cli: &Cli) -> Result<SweepSettings, ConfigError> {
    match &cli.config {
        Some(path) => SweepSettings::from_file(path),
        None => Ok(SweepSettings::default()),
    }
}

fn run(cli: Cli) -> Result<ExitCode, Failure> {
    let family = KernelFamily::from_env()?;
    match &cli.command {
        Command::Verify {
            suite,
            qmax,
            trials,
        } => {
            let suite: Suite = suite.parse()?;
            let seed = match cli.seed {
                Some(s) => s,
                None => file_settings(&cli)?.seed.unwrap_or(0),
            };
            let opts = VerifyOptions {
                qmax: *qmax,
                trials: *trials,
                seed,
            };
            let checks = verify::run(suite, &opts, &family)?;
            let ok = checks.iter().all(verify::Check::passed);
            let bytes = if cli.json {
                report::json_bytes(&json!({
                    "suite": suite.as_str(),
                    "pass": ok,
                    "checks": checks.iter().map(verify::Check::to_json).collect::<Vec<_>>(),
                }))
            } else {
                checks
                    .iter()
                    .map(|c| format!("{c}\n"))
                    .collect::<String>()
                    .into_bytes()
            };
            report::emit(cli.out.as_deref(), &bytes)
                .map_err(|e| Failure::Runtime(e.to_string()))?;
            Ok(if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Sweep(args) => {
            let flags = SweepSettings {
                mode: args.mode.clone(),
                q_min: args.q_min,
                q_max: args.q_max,
                q_list: args.q_list.clone(),
                filter: args.filter.clone(),
                a: args.a.clone(),
                x: args.x.clone(),
                parity: args.parity.clone(),
                format: args
                    .format
                    .clone()
                    .or_else(|| cli.json.then(|| "json".to_string())),
                out: cli.out.clone(),
                workers: cli.workers,
                seed: cli.seed,
            };
            let cfg = flags.overlay(file_settings(&cli)?).resolve()?;
            let table = sweep::run(&cfg, &family).map_err(|e| match e {
                SweepError::Config(c) => Failure::Config(c.0),
                SweepError::Runtime(r) => Failure::Runtime(r),
            })?;
            let bytes = match cfg.format {
                Format::Csv => table.to_csv(),
                Format::Json => report::json_bytes(&json!({
                    "config": sweep::config_json(&cfg),
                    "rows": table.rows_json(),
                    "suite_versions": suite_versions(&family),
                })),
            };
            report::emit(cfg.out.as_deref(), &bytes)
                .map_err(|e| Failure::Runtime(e.to_string()))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Eval(what) => {
            let e: Evaluation = match what {
                EvalCommand::Moment { p, h } => eval::moment(*p, *h)?,
                EvalCommand::Ssum { q, a, x, parity } => {
                    eval::ssum(*q, *a, *x, parity.parse::<Parity>()?, &family)?
                }
                EvalCommand::Lvalue { q, chi } => eval::lvalue(*q, *chi)?,
                EvalCommand::Kfun { y, parity } => {
                    eval::kfun(*y, parity.parse::<Parity>()?, &family)?
                }
            };
            let bytes = if cli.json {
                report::json_bytes(&e.to_json())
            } else {
                e.to_text().into_bytes()
            };
            report::emit(cli.out.as_deref(), &bytes)
                .map_err(|e| Failure::Runtime(e.to_string()))?;
            Ok(ExitCode::SUCCESS)
        }
    }
}
