//! Command-line front end: `verify`, `compute` and `show`.

pub mod dsl;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use opcalc::jaccalc::{self, JacError};
use opcalc::models::{realize_p, DiffOp, TautPoly, TautSpace};
use opcalc::report::TOOL_VERSION;
use opcalc::ring::RingError;
use opcalc::ringspec::RingSpec;
use opcalc::suites::{self, RingChoice, SuiteError, SuiteParams};
use opcalc::{Rat, RatRing};
use serde_json::json;
use thiserror::Error;

use crate::dsl::{Context, DslError, Value};

#[derive(Debug, Parser)]
#[command(name = "opcalc", version, about = "Exact operator calculus on curves, symmetric powers and Jacobians")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Clone, Default)]
pub struct RingArgs {
    /// curve-cohomology, curve-chow, curve-chow-symbolic, curve-chow-psi<d>, curve-chow-point, curve-chow-point-kp0
    #[arg(long)]
    pub ring: Option<String>,
    #[arg(long)]
    pub genus: Option<u32>,
    /// Ring description file; overrides --ring.
    #[arg(long)]
    pub ring_file: Option<PathBuf>,
}

#[derive(Debug, Args, Clone, Default)]
pub struct OutArgs {
    /// Write the JSON result here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Record wall-clock time in the report.
    #[arg(long)]
    pub timing: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a verification suite and print its report.
    Verify {
        suite: String,
        #[command(flatten)]
        ring: RingArgs,
        #[arg(long)]
        max_index: Option<u32>,
        #[arg(long)]
        k: Option<u32>,
        #[arg(long)]
        quick: bool,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Evaluate something: `expr <EXPR>`, `tau-pullback`, `gamma`, `t-operator [CLASS]`.
    Compute {
        target: String,
        expr: Option<String>,
        #[command(flatten)]
        ring: RingArgs,
        #[arg(long)]
        k: Option<u32>,
        #[arg(long)]
        m: Option<u32>,
        /// Do not rewrite symbols of section multiples.
        #[arg(long)]
        free_model: bool,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Pretty-print: `op <EXPR>`, `ring`, `suites`.
    Show {
        target: String,
        expr: Option<String>,
        #[command(flatten)]
        ring: RingArgs,
        /// Print a generator as a differential operator on tautological classes.
        #[arg(long)]
        as_diffop: bool,
        /// Largest symbol index differentiated by --as-diffop.
        #[arg(long, default_value_t = 3)]
        max_index: u32,
        #[arg(long)]
        free_model: bool,
    },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Dsl(#[from] DslError),
    #[error(transparent)]
    Suite(#[from] SuiteError),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Jac(#[from] JacError),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{0}")]
    Usage(String),
}

/// What a command produced: the text for stdout and the exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub output: String,
    pub code: u8,
}

fn ring_choice(args: &RingArgs) -> Result<Option<RingChoice>, CliError> {
    if let Some(path) = &args.ring_file {
        let text = std::fs::read_to_string(path)
            .map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
        return Ok(Some(RingChoice::File(RingSpec::parse(&text)?)));
    }
    args.ring.as_deref().map(RingChoice::parse).transpose().map_err(CliError::from)
}

fn build_ring(args: &RingArgs, default: &str) -> Result<Arc<RatRing>, CliError> {
    let choice = match ring_choice(args)? {
        Some(c) => c,
        None => RingChoice::parse(default)?,
    };
    Ok(choice.build::<Rat>(args.genus.unwrap_or(2))?)
}

fn taut_space(ring: &Arc<RatRing>, free: bool) -> Arc<TautSpace<Rat>> {
    if free {
        return TautSpace::new(ring);
    }
    TautSpace::with_section_rule(ring).unwrap_or_else(|_| TautSpace::new(ring))
}

fn need_expr(expr: &Option<String>, target: &str) -> Result<String, CliError> {
    expr.clone().ok_or_else(|| CliError::Usage(format!("`{target}` needs an expression argument")))
}

fn emit(out: &OutArgs, text: String) -> Result<String, CliError> {
    match &out.out {
        Some(path) => {
            std::fs::write(path, format!("{text}\n"))
                .map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
            Ok(String::new())
        }
        None => Ok(text),
    }
}

fn value_kind(v: &Value) -> &'static str {
    match v {
        Value::Scalar(_) => "ring",
        Value::Lie(_) => "lie",
        Value::Env(_) => "algebra",
        Value::Taut(_) => "tautological",
        Value::X(_) => "x",
    }
}

fn diffop(cx: &Context, v: &Value, max_index: u32) -> Result<String, CliError> {
    let Value::Lie(x) = v else {
        return Err(CliError::Usage(format!("--as-diffop needs a Lie element, got a {}", v.kind())));
    };
    let space = cx.space();
    let mut terms: BTreeMap<_, TautPoly<Rat>> = BTreeMap::new();
    for (g, c) in x.terms() {
        for (k, p) in realize_p(space, g, max_index).terms {
            let entry = terms.entry(k).or_insert_with(TautPoly::zero);
            entry.add_assign(&space.scale(&p, c));
        }
    }
    terms.retain(|_, p| !p.is_zero());
    Ok(DiffOp { terms }.show(space))
}

/// Run a parsed command. `invocation` is recorded in verification reports.
pub fn run(cli: &Cli, invocation: &str) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Verify { suite, ring, max_index, k, quick, out } => {
            let params = SuiteParams {
                ring: ring_choice(ring)?,
                genus: ring.genus,
                max_index: *max_index,
                k: *k,
                quick: *quick,
            };
            let start = Instant::now();
            let mut report = suites::run_suite(suite, &params)?;
            report.detail("invocation", invocation.to_string());
            if out.timing {
                report.elapsed_ms = Some(start.elapsed().as_millis() as u64);
            }
            let code = if report.passed() { 0 } else { 1 };
            Ok(Outcome { output: emit(out, report.to_json())?, code })
        }
        Command::Compute { target, expr, ring, k, m, free_model, out } => {
            let start = Instant::now();
            let mut doc = match target.as_str() {
                "expr" => {
                    let text = need_expr(expr, target)?;
                    let r = build_ring(ring, "curve-cohomology")?;
                    let cx = Context::new(&r, taut_space(&r, *free_model));
                    let v = cx.parse_expr(&text)?;
                    json!({
                        "input": text,
                        "ring": r.fingerprint(),
                        "type": value_kind(&v),
                        "value": cx.show(&v),
                    })
                }
                "tau-pullback" => {
                    let r = build_ring(ring, "curve-chow")?;
                    let k = k.ok_or_else(|| CliError::Usage("tau-pullback needs --k".into()))?;
                    let space = TautSpace::new(&r);
                    let closed = jaccalc::tau_pullback_closed(&r, k)?;
                    let operator = jaccalc::tau_pullback_operator(&r, k)?;
                    json!({
                        "k": k,
                        "ring": r.fingerprint(),
                        "closed": space.show(&closed),
                        "operator": space.show(&operator),
                        "agree": closed == operator,
                    })
                }
                "gamma" => {
                    let r = build_ring(ring, "curve-chow-point")?;
                    let k = k.ok_or_else(|| CliError::Usage("gamma needs --k".into()))?;
                    let g = jaccalc::gamma_ek(&r, k)?;
                    json!({ "k": k, "ring": r.fingerprint(), "value": TautSpace::new(&r).show(&g) })
                }
                "t-operator" => {
                    let r = build_ring(ring, "curve-chow")?;
                    let (k, m) = (k.unwrap_or(1), m.unwrap_or(0));
                    let cx = Context::new(&r, taut_space(&r, *free_model));
                    let class = expr.clone().unwrap_or_else(|| "1".into());
                    let a = match cx.parse_expr(&class)? {
                        Value::Scalar(a) => a,
                        v => return Err(CliError::Usage(format!("the class must be a ring element, got a {}", v.kind()))),
                    };
                    let t = jaccalc::t_from_p(&r, k, m, &a)?;
                    json!({ "k": k, "m": m, "class": class, "ring": r.fingerprint(), "value": t.show() })
                }
                other => return Err(CliError::Usage(format!("unknown compute target `{other}`"))),
            };
            doc["schema"] = json!(opcalc::report::SCHEMA_VERSION);
            doc["tool_version"] = json!(TOOL_VERSION);
            doc["target"] = json!(target);
            if out.timing {
                doc["elapsed_ms"] = json!(start.elapsed().as_millis() as u64);
            }
            let text = serde_json::to_string_pretty(&doc).expect("json serializes");
            Ok(Outcome { output: emit(out, text)?, code: 0 })
        }
        Command::Show { target, expr, ring, as_diffop, max_index, free_model } => {
            let output = match target.as_str() {
                "op" => {
                    let text = need_expr(expr, target)?;
                    let r = build_ring(ring, "curve-cohomology")?;
                    let cx = Context::new(&r, taut_space(&r, *free_model));
                    let v = cx.parse_expr(&text)?;
                    if *as_diffop {
                        diffop(&cx, &v, *max_index)?
                    } else {
                        cx.show(&v)
                    }
                }
                "ring" => build_ring(ring, "curve-cohomology")?.spec().to_text(),
                "suites" => suites::SUITE_NAMES.join("\n"),
                other => return Err(CliError::Usage(format!("unknown show target `{other}`"))),
            };
            Ok(Outcome { output, code: 0 })
        }
    }
}

/// Set the worker count from `OPCALC_THREADS`, if present.
pub fn configure_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var("OPCALC_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| CliError::Usage(format!("OPCALC_THREADS must be a positive integer, got `{v}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Usage(e.to_string()))
}
