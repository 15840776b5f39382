//! Command-line front end: `list`, `eval` and `verify`.

pub mod config;
pub mod report;
pub mod suites;

use crate::error::{Error, Result};
use crate::limits::standard_edges;
use crate::linalg::{Mat4, C};
use crate::rmatrix::{eval_r, required_params, AlgebraId, Param, ParamPoint};
use crate::twistnet::{eval_twist, network, TwistId, DEFAULT_EPS};
use clap::{Parser, Subcommand, ValueEnum};
use config::{Format, Suite, SuiteConfig};
use report::RunReport;
use std::io::Write;
use std::path::PathBuf;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "sl2net", version, about = "Evaluate sl(2) R-matrices and twists and verify the identities between them")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ListKind {
    Algebras,
    Twists,
    Edges,
    Limits,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List catalog entries, twists, network edges or limit edges.
    List { kind: ListKind },
    /// Evaluate one R-matrix or twist, e.g. `eval DYrs beta=0.4 r=5 s=2.3`.
    Eval {
        name: String,
        /// Parameters as `key=value`; values are complex, e.g. `0.4+0.1i`.
        params: Vec<String>,
        #[arg(long, default_value_t = 6)]
        precision: usize,
        /// Auxiliary parameter of the homothetical twists.
        #[arg(long, default_value_t = DEFAULT_EPS)]
        eps: f64,
    },
    /// Run verification suites and write a report.
    Verify(VerifyArgs),
}

#[derive(Debug, clap::Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum)]
    pub suite: Option<Suite>,
    /// Random points per check.
    #[arg(long)]
    pub points: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Tolerance for every gated check (negative controls keep their floor).
    #[arg(long)]
    pub tol: Option<f64>,
    /// JSON run configuration; flags override its fields.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub report: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Worker threads (default: available parallelism).
    #[arg(long)]
    pub jobs: Option<usize>,
}

/// Parse `args` (including the program name) and run; returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { write!(err, "{text}") } else { write!(out, "{text}") };
            return code;
        }
    };
    let res = match cli.command {
        Command::List { kind } => write!(out, "{}", list(kind)).map(|_| EXIT_OK).map_err(io_err),
        Command::Eval { name, params, precision, eps } => eval(&name, &params, precision, eps).and_then(|s| {
            write!(out, "{s}").map_err(io_err)?;
            Ok(EXIT_OK)
        }),
        Command::Verify(args) => verify(&args, out, err),
    };
    match res {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_CONFIG
        }
    }
}

fn io_err(e: std::io::Error) -> Error {
    Error::Config(format!("io: {e}"))
}

fn param_names(ps: &[Param]) -> String {
    ps.iter().map(|p| p.name()).collect::<Vec<_>>().join(",")
}

/// Stable listing, one item per line with its role tag in brackets.
pub fn list(kind: ListKind) -> String {
    let lines: Vec<String> = match kind {
        ListKind::Algebras => AlgebraId::ALL
            .iter()
            .map(|a| format!("{} [{}] spectral={:?} params={}", a.name(), a.family(), a.spectral(), param_names(required_params(*a))))
            .collect(),
        ListKind::Twists => TwistId::ALL
            .iter()
            .map(|t| format!("{} [{}] spectral={:?} params={}", t.name(), t.kind().name(), t.spectral(), param_names(t.required_params())))
            .collect(),
        ListKind::Edges => network()
            .iter()
            .map(|e| format!("{} [{}] map={} compare={:?}", e.name(), e.kind.name(), e.param_map.name(), e.compare))
            .collect(),
        ListKind::Limits => standard_edges()
            .iter()
            .map(|e| format!("{} [{:?}] {}", e.name(), e.mode, e.description))
            .collect(),
    };
    let mut s = lines.join("\n");
    s.push('\n');
    s
}

/// Parse `key=value` pairs into a parameter point.
pub fn parse_params(args: &[String]) -> Result<ParamPoint> {
    let mut pt = ParamPoint::new();
    for a in args {
        let (k, v) = a.split_once('=').ok_or_else(|| Error::Config(format!("expected key=value, got `{a}`")))?;
        let p = Param::from_name(k.trim()).ok_or_else(|| Error::Config(format!("unknown parameter `{k}`")))?;
        let v: C = v.trim().parse().map_err(|_| Error::Config(format!("cannot parse `{v}` as a complex number")))?;
        pt.set(p, v);
    }
    Ok(pt)
}

fn fmt_c(z: C, prec: usize) -> String {
    format!("{:.*}{:+.*}i", prec, z.re, prec, z.im)
}

fn fmt_mat(m: &Mat4, prec: usize) -> String {
    let mut s = String::new();
    for i in 0..4 {
        let row: Vec<String> = (0..4).map(|j| fmt_c(m[(i, j)], prec)).collect();
        s.push_str(&format!("  [ {} ]\n", row.join("  ")));
    }
    s
}

/// Evaluate an R-matrix or twist by name and render it.
pub fn eval(name: &str, params: &[String], prec: usize, eps: f64) -> Result<String> {
    let pt = parse_params(params)?;
    let pol = crate::specfun::TruncationPolicy::default();
    if let Some(id) = AlgebraId::from_name(name) {
        let v = eval_r(id, &pt, &pol)?;
        let scalar = if v.scalar_singular { "singular".to_string() } else { fmt_c(v.scalar_norm, prec) };
        return Ok(format!("{} [{}] at {}\nscalar_norm: {}\ncore:\n{}", id.name(), id.family(), pt, scalar, fmt_mat(&v.core, prec)));
    }
    if let Some(id) = TwistId::from_name(name) {
        let v = eval_twist(id, None, &pt, eps, &pol)?;
        let scalar = v.scalar.map(|s| fmt_c(s, prec)).unwrap_or_else(|| "not available".to_string());
        return Ok(format!("{} [{}] at {}\nscalar: {}\ncore:\n{}", id.name(), id.kind().name(), pt, scalar, fmt_mat(&v.core, prec)));
    }
    Err(Error::Config(format!("unknown algebra or twist `{name}`")))
}

/// Merge the config file and flags.
pub fn resolve_config(args: &VerifyArgs) -> Result<SuiteConfig> {
    let mut cfg = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
            SuiteConfig::from_json(&text)?
        }
        None => SuiteConfig::default(),
    };
    if let Some(s) = args.suite {
        cfg.suite = s;
    }
    if let Some(n) = args.points {
        cfg.points = n;
    }
    if let Some(s) = args.seed {
        cfg.seed = s;
    }
    if args.tol.is_some() {
        cfg.tol = args.tol;
    }
    if let Some(f) = args.format {
        cfg.format = f;
    }
    cfg.validate()?;
    Ok(cfg)
}

/// Build and run the suites of `cfg`.
pub fn run_suites(cfg: &SuiteConfig, jobs: usize) -> Result<RunReport> {
    let plan = suites::plan(cfg);
    let entries = suites::execute(&plan.items, &cfg.truncation, jobs)?;
    Ok(RunReport::new(cfg.clone(), plan.conventions, entries))
}

fn verify(args: &VerifyArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let cfg = resolve_config(args)?;
    let jobs = args
        .jobs
        .unwrap_or_else(|| std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1));
    let report = run_suites(&cfg, jobs)?;
    let text = match cfg.format {
        Format::Json => report.to_json(),
        Format::Markdown => report.to_markdown(),
    };
    match &args.report {
        Some(path) => std::fs::write(path, &text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?,
        None => write!(out, "{text}").map_err(io_err)?,
    }
    let s = report.summary;
    writeln!(
        err,
        "{} checks: {} pass, {} fail, {} error, {} skipped, {} informational",
        s.total, s.pass, s.fail, s.error, s.skipped, s.info
    )
    .map_err(io_err)?;
    Ok(if s.gated_failures() == 0 { EXIT_OK } else { EXIT_FAIL })
}
