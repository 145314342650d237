use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use dynlz::gadgets::OvInstance;
use dynlz::index::IndexConfig;
use dynlz_cli::report::{self, Format};
use dynlz_cli::run::{run, Failure, RunConfig};
use dynlz_cli::scaling::scaling_report;
use dynlz_cli::script::EditScript;
use dynlz_cli::workload::{generate, WorkloadKind, WorkloadParams};
use dynlz_cli::{ov, with_backend, Backend};

/// Fully dynamic LZ77: run edit scripts, generate workloads, measure scaling,
/// and decide Orthogonal Vectors through phrase counts.
#[derive(Parser)]
#[command(name = "dynlz", version)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Common {
    /// Index backend.
    #[arg(long, global = true, value_enum, env = "DYNLZ_BACKEND", default_value = "fast")]
    backend: Backend,
    /// Compare every step with brute-force references.
    #[arg(long, global = true, env = "DYNLZ_CHECK_ORACLE")]
    check_oracle: bool,
    /// Hash and workload seed.
    #[arg(long, global = true, env = "DYNLZ_SEED")]
    seed: Option<u64>,
    /// Highest interval level of the fast backend.
    #[arg(long, global = true, env = "DYNLZ_LMAX")]
    lmax: Option<u32>,
    /// Report format. `run` defaults to JSON, other commands to a text summary.
    #[arg(long, global = true, value_enum, env = "DYNLZ_REPORT")]
    report: Option<Format>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true, env = "DYNLZ_OUT")]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Execute an edit script (`-` reads stdin).
    Run {
        script: PathBuf,
        /// Check interval cleanliness inside every transition.
        #[arg(long, env = "DYNLZ_DEBUG_CHECKS")]
        debug_checks: bool,
    },
    /// Print a deterministic edit script.
    GenWorkload {
        #[arg(value_enum)]
        kind: WorkloadKind,
        #[arg(short, long, default_value_t = 64)]
        n: usize,
        #[arg(long, default_value_t = 100)]
        steps: usize,
        #[arg(long, default_value_t = 4)]
        sigma: u32,
        /// Chance of a query after each edit.
        #[arg(long, default_value_t = 0.25)]
        query_rate: f64,
    },
    /// Primitive calls per random substitution for several lengths.
    ScalingReport {
        #[arg(long, value_delimiter = ',', default_values_t = [1024usize, 2048, 4096, 8192])]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 200)]
        steps: usize,
        #[arg(long, default_value_t = 4)]
        sigma: u32,
    },
    /// Decide an Orthogonal Vectors instance (one 0/1 vector per line).
    Ov {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
    },
}

fn emit(out: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn read_input(p: &Path) -> anyhow::Result<String> {
    if p.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        return Ok(s);
    }
    std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn dispatch(cli: Cli) -> anyhow::Result<u8> {
    let c = &cli.common;
    let seed = c.seed.unwrap_or(IndexConfig::default().seed);
    let mut cfg = RunConfig { backend: c.backend, seed, lmax: c.lmax, check_oracle: c.check_oracle, debug_checks: false };
    let out = c.out.as_deref();
    match cli.cmd {
        Cmd::Run { script, debug_checks } => {
            cfg.debug_checks = debug_checks;
            let text = read_input(&script)?;
            let parsed = match EditScript::parse_in(&text, script.parent()) {
                Ok(s) => s,
                Err(e) => {
                    eprintln!("error: {}: {e}", script.display());
                    return Ok(1);
                }
            };
            let (rep, failure) = with_backend!(cfg.backend, I => run::<I>(&parsed, &cfg));
            let body = match c.report.unwrap_or(Format::Json) {
                Format::Json => report::json(&rep),
                Format::Csv => report::run_csv(&rep)?,
            };
            emit(out, &body)?;
            let Some(f) = failure else { return Ok(0) };
            eprintln!("error: {f}");
            if let Failure::Mismatch(r) = &f {
                eprintln!("minimized reproduction:\n{}", report::json(r));
            }
            Ok(f.exit_code() as u8)
        }
        Cmd::GenWorkload { kind, n, steps, sigma, query_rate } => {
            if !(0.0..=1.0).contains(&query_rate) {
                bail!("--query-rate must lie in [0, 1]");
            }
            let params = WorkloadParams { kind, n, steps, seed, sigma, query_rate };
            emit(out, &generate(&params).to_string())?;
            Ok(0)
        }
        Cmd::ScalingReport { sizes, steps, sigma } => {
            let ecfg = cfg.engine_config();
            let rep = match with_backend!(cfg.backend, I => scaling_report::<I>(&sizes, steps, sigma, ecfg)) {
                Ok(r) => r,
                Err(e) => {
                    eprintln!("internal error: {e}");
                    return Ok(3);
                }
            };
            let body = match c.report {
                Some(Format::Json) => report::json(&rep),
                Some(Format::Csv) => report::scaling_csv(&rep)?,
                None => report::scaling_text(&rep),
            };
            emit(out, &body)?;
            Ok(0)
        }
        Cmd::Ov { a, b } => {
            let parse = |p: &Path| -> anyhow::Result<Vec<Vec<bool>>> {
                ov::parse_vectors(&read_input(p)?).map_err(|e| anyhow::anyhow!("{}: {e}", p.display()))
            };
            let inst = OvInstance::new(parse(&a)?, parse(&b)?)?;
            let res = match with_backend!(cfg.backend, I => ov::solve::<I>(&inst, &cfg)) {
                Ok(r) => r,
                Err(e) => {
                    eprintln!("internal error: {e}");
                    return Ok(3);
                }
            };
            let body = match c.report {
                Some(Format::Json) => report::json(&res),
                Some(Format::Csv) => report::ov_csv(&res)?,
                None => report::ov_text(&res),
            };
            emit(out, &body)?;
            if res.brute_force.is_some_and(|b| b != res.has_orthogonal) {
                eprintln!("error: verdict disagrees with brute force");
                return Ok(2);
            }
            Ok(0)
        }
    }
}
