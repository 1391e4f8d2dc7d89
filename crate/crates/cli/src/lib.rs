//! Command-line front end: reads a JSON domain spec, runs one computation
//! and prints a summary, optionally writing a JSON document.
//!
//! Exit codes: 0 success, 1 input error, 2 stalled or undecided, 3 refused
//! because the hypothesis on `g_w` failed.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::json;

use subelliptic::domain::{default_coeff_set, type_lower_bound, DomainSpec};
use subelliptic::effective::{self, EffectiveRun, HypoStatus};
use subelliptic::kohn::{self, CertificateRecord, KohnTrace, Outcome, TraceEvent};
use subelliptic::numcheck::{self, SampleReport};
use subelliptic::spec_file::{parse_spec, RunConfig, SpecFile};
use subelliptic::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_STALLED: i32 = 2;
pub const EXIT_REFUSED: i32 = 3;

/// Bound on the finite-difference relative error accepted by `verify`.
pub const FD_TOLERANCE: f64 = 1e-5;
/// Most negative boundary value of the Levi determinant accepted by `verify`.
pub const BOUNDARY_TOLERANCE: f64 = -1e-10;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] Error),
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Document {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(Error::Undecided(_) | Error::InfiniteTypeAlongLine) => EXIT_STALLED,
            CliError::Core(Error::HypothesisFailed(_)) => EXIT_REFUSED,
            _ => EXIT_INPUT,
        }
    }
}

type CliResult<T> = Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "subelliptic", version, about = "Subelliptic multipliers on model domains in C^2")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: Options,
}

#[derive(Debug, Args)]
pub struct Options {
    #[arg(long, global = true, default_value_t = 16)]
    pub max_steps: u32,
    #[arg(long, global = true, default_value_t = 32)]
    pub radical_cap: u32,
    #[arg(long, global = true, default_value_t = 8)]
    pub curve_degree_cap: u32,
    #[arg(long, global = true, default_value_t = 1000)]
    pub samples: usize,
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,
    /// Sampling radius; defaults to the spec's `sample_radius`.
    #[arg(long, global = true)]
    pub radius: Option<f64>,
    /// Take the hypothesis on `g_w` as given instead of sampling it.
    #[arg(long, global = true)]
    pub assert_hypo: bool,
    /// Run the effective chain even when the hypothesis failed.
    #[arg(long, global = true)]
    pub force: bool,
    /// Write a JSON document to this path.
    #[arg(long, global = true, value_name = "PATH")]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the Levi determinant.
    Levi { spec: PathBuf },
    /// Lower bound for the type from contact orders of curves.
    Type { spec: PathBuf },
    /// Run Kohn's algorithm.
    Kohn { spec: PathBuf },
    /// Run the effective derivative chain.
    Effective { spec: PathBuf },
    /// Sample the hypothesis on `g_w`.
    CheckHypo { spec: PathBuf },
    /// Finite-difference and boundary checks of the Levi determinant.
    Verify {
        spec: PathBuf,
        /// Finite-difference step.
        #[arg(long, default_value_t = 1e-4)]
        step: f64,
    },
    /// Type, optimal order and both certified orders side by side.
    Compare { spec: PathBuf },
    /// Re-derive a JSON trace written by `kohn` or `effective`.
    Replay { trace: PathBuf },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    Classic,
    Effective,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Summary {
    pub line: String,
    pub outcome: Outcome,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HypoRecord {
    pub status: HypoStatus,
    pub sound: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<SampleReport>,
}

/// The file written by `kohn --json` and `effective --json`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TraceDocument {
    pub algorithm: Algorithm,
    pub config: RunConfig,
    pub spec: SpecFile,
    pub events: Vec<TraceEvent>,
    pub certificates: Vec<CertificateRecord>,
    pub summary: Summary,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hypothesis: Option<HypoRecord>,
}

impl TraceDocument {
    pub fn new(
        algorithm: Algorithm,
        config: RunConfig,
        domain: &DomainSpec,
        trace: &KohnTrace,
        outcome: &Outcome,
    ) -> Self {
        Self {
            algorithm,
            config,
            spec: SpecFile::from(domain),
            events: trace.events.clone(),
            certificates: trace.events.iter().flat_map(|e| e.certificates.iter().cloned()).collect(),
            summary: Summary { line: outcome.to_string(), outcome: outcome.clone() },
            hypothesis: None,
        }
    }

    /// Recomputes the outcome from the spec echo and checks that it matches
    /// the recorded summary exactly.
    pub fn replay(&self) -> Result<Outcome, Error> {
        let domain = self.spec.resolve()?.domain;
        let trace = KohnTrace { events: self.events.clone() };
        let listed: Vec<CertificateRecord> = self.events.iter().flat_map(|e| e.certificates.iter().cloned()).collect();
        if listed != self.certificates {
            return Err(Error::Inconsistent("certificate list differs from the events".into()));
        }
        let outcome = match self.algorithm {
            Algorithm::Classic => kohn::replay(&domain, &trace)?,
            Algorithm::Effective => effective::replay(&domain, &trace)?,
        };
        if outcome != self.summary.outcome || outcome.to_string() != self.summary.line {
            return Err(Error::Inconsistent(format!("summary '{}' but replay gives '{outcome}'", self.summary.line)));
        }
        Ok(outcome)
    }
}

struct Ctx<'a> {
    cfg: RunConfig,
    radius: Option<f64>,
    json: Option<PathBuf>,
    out: &'a mut dyn Write,
}

impl Ctx<'_> {
    fn radius(&self, domain: &DomainSpec) -> f64 {
        self.radius.unwrap_or(domain.sample_radius)
    }

    fn emit(&self, value: &impl Serialize) -> CliResult<()> {
        let Some(path) = &self.json else {
            return Ok(());
        };
        let text = serde_json::to_string_pretty(value).expect("documents serialize");
        std::fs::write(path, text + "\n").map_err(|source| CliError::Write { path: path.clone(), source })
    }
}

/// Parses `args` (program name first) and runs the command. Returns the
/// process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    match dispatch(cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(cli: Cli, out: &mut dyn Write) -> CliResult<i32> {
    let o = cli.opts;
    let cfg = RunConfig {
        max_steps: o.max_steps,
        radical_cap: o.radical_cap,
        curve_degree_cap: o.curve_degree_cap,
        samples: o.samples,
        seed: o.seed,
        force: o.force,
        assert_hypo: o.assert_hypo,
    };
    cfg.validate()?;
    if let Some(r) = o.radius.filter(|r| !(*r > 0.0 && r.is_finite())) {
        return Err(Error::Invalid(format!("radius must be positive, got {r}")).into());
    }
    let mut ctx = Ctx { cfg, radius: o.radius, json: o.json, out };
    match cli.command {
        Command::Levi { spec } => levi(&mut ctx, &load(&spec)?),
        Command::Type { spec } => type_bound(&mut ctx, &load(&spec)?),
        Command::Kohn { spec } => classic(&mut ctx, &load(&spec)?),
        Command::Effective { spec } => run_effective(&mut ctx, &load(&spec)?),
        Command::CheckHypo { spec } => check_hypo(&mut ctx, &load(&spec)?),
        Command::Verify { spec, step } => verify(&mut ctx, &load(&spec)?, step),
        Command::Compare { spec } => compare(&mut ctx, &load(&spec)?),
        Command::Replay { trace } => replay(&mut ctx, &trace),
    }
}

fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::Read { path: path.to_path_buf(), source })
}

/// Reads and expands a spec file; warnings go to stderr.
pub fn load(path: &Path) -> CliResult<DomainSpec> {
    let resolved = parse_spec(&read(path)?)?.resolve()?;
    for w in &resolved.warnings {
        eprintln!("warning: {w}");
    }
    Ok(resolved.domain)
}

macro_rules! say {
    ($ctx:expr, $($arg:tt)*) => {
        writeln!($ctx.out, $($arg)*).expect("stdout is writable")
    };
}

fn levi(ctx: &mut Ctx, domain: &DomainSpec) -> CliResult<i32> {
    let lambda = domain.levi_data()?.lambda;
    say!(ctx, "{lambda}");
    ctx.emit(&json!({ "config": ctx.cfg, "spec": SpecFile::from(domain), "lambda": lambda }))?;
    Ok(EXIT_OK)
}

fn type_bound(ctx: &mut Ctx, domain: &DomainSpec) -> CliResult<i32> {
    let bound = type_lower_bound(domain, ctx.cfg.curve_degree_cap, &default_coeff_set())?;
    say!(ctx, "type lower bound: {}", bound.value);
    say!(ctx, "witness: {}", bound.witness);
    say!(ctx, "curves checked: {}", bound.curves_checked);
    ctx.emit(&json!({
        "config": ctx.cfg,
        "spec": SpecFile::from(domain),
        "type": bound.value,
        "witness": bound.witness.to_string(),
        "curves_checked": bound.curves_checked,
    }))?;
    Ok(EXIT_OK)
}

fn classic(ctx: &mut Ctx, domain: &DomainSpec) -> CliResult<i32> {
    let run = kohn::run(domain, &ctx.cfg.kohn())?;
    say!(ctx, "{}", run.outcome);
    ctx.emit(&TraceDocument::new(Algorithm::Classic, ctx.cfg, domain, &run.trace, &run.outcome))?;
    Ok(if run.outcome.is_success() { EXIT_OK } else { EXIT_STALLED })
}

/// Hypothesis status from `--assert-hypo` or from sampling.
fn gate(ctx: &Ctx, domain: &DomainSpec) -> CliResult<(HypoStatus, Option<SampleReport>)> {
    if ctx.cfg.assert_hypo {
        return Ok((HypoStatus::Asserted, None));
    }
    let report = numcheck::sample_hypo(domain, ctx.radius(domain), ctx.cfg.samples, ctx.cfg.seed)?;
    Ok((report.hypo_status(), Some(report)))
}

fn effective_run(ctx: &Ctx, domain: &DomainSpec) -> CliResult<(EffectiveRun, Option<SampleReport>)> {
    let (status, report) = gate(ctx, domain)?;
    let run = effective::zeta_chain(domain, status, ctx.cfg.force).map_err(|e| match (e, &report) {
        (Error::HypothesisFailed(msg), Some(r)) => Error::HypothesisFailed(format!(
            "{msg}; sampled delta_hat = {}",
            r.delta_hat.map_or("-".into(), |d| d.to_string())
        )),
        (e, _) => e,
    })?;
    Ok((run, report))
}

fn run_effective(ctx: &mut Ctx, domain: &DomainSpec) -> CliResult<i32> {
    let (run, report) = effective_run(ctx, domain)?;
    say!(ctx, "hypothesis: {}", run.hypo_status);
    if !run.sound {
        say!(ctx, "warning: forced past a failed hypothesis, the result is unsound");
    }
    if run.multi_minima {
        say!(ctx, "note: several components reach tau = {}; using component {}", run.tau, run.selected_component);
    }
    for (j, m) in run.chain.iter().enumerate() {
        say!(ctx, "zeta_{} = {}  order {}", j + 1, m.poly, m.order);
    }
    let outcome = run.outcome();
    say!(ctx, "{outcome}");
    let mut doc = TraceDocument::new(Algorithm::Effective, ctx.cfg, domain, &run.trace(), &outcome);
    doc.hypothesis = Some(HypoRecord { status: run.hypo_status, sound: run.sound, report });
    ctx.emit(&doc)?;
    Ok(EXIT_OK)
}

fn check_hypo(ctx: &mut Ctx, domain: &DomainSpec) -> CliResult<i32> {
    let report = numcheck::sample_hypo(domain, ctx.radius(domain), ctx.cfg.samples, ctx.cfg.seed)?;
    say!(ctx, "radius {}, samples {}, seed {}", report.radius, report.n_samples, report.seed);
    say!(ctx, "delta_hat {}", report.delta_hat.map_or("-".into(), |d| d.to_string()));
    say!(ctx, "degenerate samples {}", report.degenerate);
    say!(ctx, "violations {}", report.violation_count);
    say!(ctx, "hypothesis: {}", report.hypo_status());
    ctx.emit(
        &json!({ "config": ctx.cfg, "spec": SpecFile::from(domain), "status": report.hypo_status(), "report": report }),
    )?;
    Ok(EXIT_OK)
}

fn verify(ctx: &mut Ctx, domain: &DomainSpec, step: f64) -> CliResult<i32> {
    let radius = ctx.radius(domain);
    let (n, seed) = (ctx.cfg.samples, ctx.cfg.seed);
    let points = numcheck::sample_points(radius, n, seed);
    let fd = numcheck::finite_diff_levi(domain, &points, step)?;
    let boundary = numcheck::boundary_pseudoconvexity(domain, radius, n, seed)?;
    let bound = numcheck::verify_levi_bound(domain, radius, n, seed)?;
    let min_boundary = boundary.min_lambda_on_boundary.unwrap_or(f64::INFINITY);
    let pass = fd <= FD_TOLERANCE && min_boundary >= BOUNDARY_TOLERANCE;
    say!(ctx, "finite differences: max relative error {fd:e} over {n} points, h = {step:e}");
    say!(ctx, "boundary: min lambda {min_boundary:e} over {n} points");
    match bound.c_hat {
        Some(c) => say!(ctx, "levi bound: c_hat {c:e}"),
        None => say!(ctx, "levi bound: every sample degenerate"),
    }
    say!(ctx, "verify: {}", if pass { "pass" } else { "fail" });
    ctx.emit(&json!({
        "config": ctx.cfg,
        "spec": SpecFile::from(domain),
        "finite_difference": { "step": step, "max_relative_error": fd },
        "boundary": boundary,
        "levi_bound": bound,
        "pass": pass,
    }))?;
    Ok(if pass { EXIT_OK } else { EXIT_STALLED })
}

fn compare(ctx: &mut Ctx, domain: &DomainSpec) -> CliResult<i32> {
    let bound = type_lower_bound(domain, ctx.cfg.curve_degree_cap, &default_coeff_set())?;
    let classic = kohn::run(domain, &ctx.cfg.kohn())?;
    let (eff, _) = effective_run(ctx, domain)?;
    let table = effective::compare_orders(domain, &bound, &classic.outcome, &eff);
    say!(ctx, "{table}");
    ctx.emit(&json!({ "config": ctx.cfg, "spec": SpecFile::from(domain), "comparison": table }))?;
    Ok(if classic.outcome.is_success() { EXIT_OK } else { EXIT_STALLED })
}

fn replay(ctx: &mut Ctx, path: &Path) -> CliResult<i32> {
    let doc: TraceDocument =
        serde_json::from_str(&read(path)?).map_err(|source| CliError::Document { path: path.to_path_buf(), source })?;
    let outcome = doc.replay()?;
    say!(ctx, "{outcome}");
    Ok(if outcome.is_success() { EXIT_OK } else { EXIT_STALLED })
}
