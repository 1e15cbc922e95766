//! Argument parsing and command dispatch.
//!
//! [`run`] never touches the process: it returns the exit code and the text for
//! standard output and standard error, so it can be driven directly from tests.
//! Exit codes are 0 on success, 1 when an identity check fails (the envelope is
//! still written) and 2 on usage or domain errors (one line on standard error).

use std::ffi::OsString;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dualconf_core::dists::{poisson_sample, LocScaleParams, LocationFamily, Probability};
use dualconf_core::duality::{
    confidence_density, dual_of, identity_terms, solve_interval, ConfidenceDensity, Evidence,
    Family, IdentityMethod, IntervalKind, Observation,
};
use dualconf_core::montecarlo::{trial_uniform, ExperimentSpec, TrueModel};
use dualconf_core::quad::DEFAULT_TOL;
use serde_json::{json, Map, Value};

use crate::coverage;
use crate::output::{endpoint, num, num_text, Envelope, Table};

/// Environment variable overriding the quadrature tolerance of `identity --method quad`.
pub const QUAD_TOL_VAR: &str = "DUALCONF_QUAD_TOL";

const CLOSED_PASS_TOL: f64 = 1e-12;
const QUAD_PASS_TOL: f64 = 1e-8;

#[derive(Debug, Parser)]
#[command(
    name = "dualconf",
    version,
    about = "Confidence densities and intervals from single observations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve a confidence interval at a given level.
    Interval(IntervalArgs),
    /// Tabulate the confidence density on a grid.
    Density(DensityArgs),
    /// Check that the two sampling tails and the confidence mass sum to one.
    Identity(IdentityArgs),
    /// Estimate frequentist coverage by simulation.
    Coverage(CoverageArgs),
    /// Draw seeded samples from a distribution.
    Sample(SampleArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Dist {
    Laplace,
    Normal,
    Cauchy,
    Poisson,
}

impl Dist {
    fn family(self) -> Family {
        match self {
            Dist::Laplace => Family::Laplace,
            Dist::Normal => Family::Normal,
            Dist::Cauchy => Family::Cauchy,
            Dist::Poisson => Family::Poisson,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    Central,
    Shortest,
    Upper,
    Lower,
}

impl Kind {
    fn interval_kind(self) -> IntervalKind {
        match self {
            Kind::Central => IntervalKind::Central,
            Kind::Shortest => IntervalKind::Shortest,
            Kind::Upper => IntervalKind::UpperLimit,
            Kind::Lower => IntervalKind::LowerLimit,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Closed,
    Quad,
}

#[derive(Debug, Args)]
struct EvidenceArgs {
    #[arg(long, value_enum)]
    dist: Dist,
    /// Observed value (location families).
    #[arg(long, value_parser = finite, allow_negative_numbers = true)]
    obs: Option<f64>,
    /// Observed count (poisson).
    #[arg(long, allow_negative_numbers = true)]
    count: Option<u64>,
    /// Known scale (location families).
    #[arg(long, value_parser = positive, allow_negative_numbers = true)]
    scale: Option<f64>,
}

#[derive(Debug, Args)]
struct IntervalArgs {
    #[command(flatten)]
    evidence: EvidenceArgs,
    #[arg(long, value_parser = open_unit, allow_negative_numbers = true)]
    level: f64,
    #[arg(long, value_enum, default_value = "central")]
    kind: Kind,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Debug, Args)]
struct DensityArgs {
    #[command(flatten)]
    evidence: EvidenceArgs,
    #[arg(long, value_parser = finite, allow_negative_numbers = true)]
    from: f64,
    #[arg(long, value_parser = finite, allow_negative_numbers = true)]
    to: f64,
    #[arg(long, value_parser = clap::value_parser!(u64).range(2..), allow_negative_numbers = true)]
    points: u64,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Debug, Args)]
struct IdentityArgs {
    #[command(flatten)]
    evidence: EvidenceArgs,
    #[arg(long, value_parser = finite, allow_negative_numbers = true)]
    a1: f64,
    #[arg(long, value_parser = finite, allow_negative_numbers = true)]
    a2: f64,
    #[arg(long, value_enum, default_value = "closed")]
    method: Method,
    /// Largest residual that passes [default: 1e-12 closed, 1e-8 quad].
    #[arg(long, value_parser = positive, allow_negative_numbers = true)]
    tol: Option<f64>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Debug, Args)]
struct CoverageArgs {
    #[arg(long, value_enum)]
    dist: Dist,
    /// True location (location families).
    #[arg(long, value_parser = finite, allow_negative_numbers = true)]
    a: Option<f64>,
    /// True rate (poisson).
    #[arg(long, value_parser = positive, allow_negative_numbers = true)]
    lambda: Option<f64>,
    #[arg(long, value_parser = positive, allow_negative_numbers = true)]
    scale: Option<f64>,
    #[arg(long, value_parser = open_unit, allow_negative_numbers = true)]
    level: f64,
    #[arg(long, value_enum, default_value = "central")]
    kind: Kind,
    #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..), allow_negative_numbers = true)]
    trials: u64,
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    seed: u64,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..), allow_negative_numbers = true)]
    workers: u64,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Debug, Args)]
struct SampleArgs {
    #[arg(long, value_enum)]
    dist: Dist,
    #[arg(long, value_parser = finite, allow_negative_numbers = true)]
    location: Option<f64>,
    #[arg(long, value_parser = positive, allow_negative_numbers = true)]
    scale: Option<f64>,
    /// Mean (poisson).
    #[arg(long, value_parser = positive, allow_negative_numbers = true)]
    mean: Option<f64>,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..), allow_negative_numbers = true)]
    n: u64,
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    seed: u64,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

fn parse_real(s: &str) -> Result<f64, String> {
    s.trim()
        .parse::<f64>()
        .map_err(|_| format!("expected a real number, got '{s}'"))
}

fn finite(s: &str) -> Result<f64, String> {
    let v = parse_real(s)?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err("must be finite".into())
    }
}

fn positive(s: &str) -> Result<f64, String> {
    let v = parse_real(s)?;
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err("must be a positive finite number".into())
    }
}

fn open_unit(s: &str) -> Result<f64, String> {
    let v = parse_real(s)?;
    if v > 0.0 && v < 1.0 {
        Ok(v)
    } else {
        Err("must lie strictly between 0 and 1".into())
    }
}

/// What a command produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn usage(msg: impl std::fmt::Display) -> Self {
        Outcome {
            code: 2,
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
        }
    }
}

/// Process environment that commands may consult.
#[derive(Debug, Clone, Default)]
pub struct Env {
    /// Raw value of `DUALCONF_QUAD_TOL`, if set.
    pub quad_tol: Option<String>,
}

impl Env {
    pub fn from_process() -> Self {
        Env {
            quad_tol: std::env::var(QUAD_TOL_VAR).ok(),
        }
    }
}

type CmdResult = Result<(Envelope, Option<String>, i32), String>;

pub fn run<I, T>(args: I, env: &Env) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Outcome {
                    code: 0,
                    stdout: e.render().to_string(),
                    stderr: String::new(),
                },
                ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
                    Outcome::usage("a subcommand is required; see --help")
                }
                _ => {
                    // First paragraph only, joined onto one line.
                    let text = e.render().to_string();
                    let line: Vec<&str> = text
                        .lines()
                        .take_while(|l| !l.trim().is_empty())
                        .map(str::trim)
                        .collect();
                    Outcome {
                        code: 2,
                        stdout: String::new(),
                        stderr: format!("{}\n", line.join(" ")),
                    }
                }
            };
        }
    };
    let out = match cli.command {
        Command::Interval(a) => cmd_interval(a),
        Command::Density(a) => cmd_density(a),
        Command::Identity(a) => cmd_identity(a, env),
        Command::Coverage(a) => cmd_coverage(a),
        Command::Sample(a) => cmd_sample(a),
    };
    match out {
        Ok((envelope, csv, code)) => Outcome {
            code,
            stdout: csv.unwrap_or_else(|| envelope.to_json()),
            stderr: String::new(),
        },
        Err(msg) => Outcome::usage(msg),
    }
}

fn core_err(e: dualconf_core::Error) -> String {
    e.to_string()
}

impl EvidenceArgs {
    fn resolve(&self, inputs: &mut Map<String, Value>) -> Result<ConfidenceDensity, String> {
        let family = self.dist.family();
        inputs.insert("dist".into(), json!(family.name()));
        let evidence = if family == Family::Poisson {
            if self.obs.is_some() {
                return Err("--obs does not apply to --dist poisson; use --count".into());
            }
            if self.scale.is_some() {
                return Err("--scale does not apply to --dist poisson".into());
            }
            let count = self.count.ok_or("--count is required for --dist poisson")?;
            inputs.insert("count".into(), json!(count));
            Evidence::Count(count)
        } else {
            if self.count.is_some() {
                return Err(format!(
                    "--count applies only to --dist poisson, not {}",
                    family.name()
                ));
            }
            let obs = self
                .obs
                .ok_or_else(|| format!("--obs is required for --dist {}", family.name()))?;
            let scale = self
                .scale
                .ok_or_else(|| format!("--scale is required for --dist {}", family.name()))?;
            inputs.insert("obs".into(), num(obs));
            inputs.insert("scale".into(), num(scale));
            Evidence::Measurement {
                obs: Observation::new(obs).map_err(core_err)?,
                scale,
            }
        };
        dual_of(family, evidence).map_err(core_err)
    }
}

fn format_name(f: Format) -> &'static str {
    match f {
        Format::Json => "json",
        Format::Csv => "csv",
    }
}

fn cmd_interval(a: IntervalArgs) -> CmdResult {
    let mut inputs = Map::new();
    let cd = a.evidence.resolve(&mut inputs)?;
    let kind = a.kind.interval_kind();
    inputs.insert("level".into(), num(a.level));
    inputs.insert("kind".into(), json!(kind.name()));
    inputs.insert("format".into(), json!(format_name(a.format)));

    let iv = solve_interval(&cd, a.level, kind).map_err(core_err)?;
    let p = iv.probability(&cd).map_err(core_err)?.get();
    let result = json!({
        "lower": endpoint(iv.lower),
        "upper": endpoint(iv.upper),
        "level": num(iv.level),
        "kind": kind.name(),
        "probability": num(p),
    });
    let csv = (a.format == Format::Csv).then(|| {
        let mut t = Table::new(&["lower", "upper", "level", "kind", "probability"]);
        t.row([
            num_text(iv.lower.value()),
            num_text(iv.upper.value()),
            num_text(iv.level),
            kind.name().to_string(),
            num_text(p),
        ]);
        t.finish()
    });
    let env = Envelope {
        command: "interval",
        inputs,
        result,
        warnings: vec![],
    };
    Ok((env, csv, 0))
}

fn cmd_density(a: DensityArgs) -> CmdResult {
    let mut inputs = Map::new();
    let cd = a.evidence.resolve(&mut inputs)?;
    if a.from >= a.to {
        return Err(format!(
            "--from ({}) must be less than --to ({})",
            a.from, a.to
        ));
    }
    if a.from < cd.support_min() {
        return Err(format!(
            "--from ({}) is below the parameter support, which starts at {}",
            a.from,
            cd.support_min()
        ));
    }
    inputs.insert("from".into(), num(a.from));
    inputs.insert("to".into(), num(a.to));
    inputs.insert("points".into(), json!(a.points));
    inputs.insert("format".into(), json!(format_name(a.format)));

    let last = a.points - 1;
    let step = (a.to - a.from) / last as f64;
    let mut rows = Vec::with_capacity(a.points as usize);
    for i in 0..a.points {
        let theta = if i == last {
            a.to
        } else {
            a.from + i as f64 * step
        };
        let d = confidence_density(&cd, theta).map_err(core_err)?;
        rows.push((theta, d));
    }
    let csv = (a.format == Format::Csv).then(|| {
        let mut t = Table::new(&["theta", "density"]);
        for &(theta, d) in &rows {
            t.row([num_text(theta), num_text(d)]);
        }
        t.finish()
    });
    let result = json!({
        "density_kind": cd.kind().name(),
        "rows": rows
            .iter()
            .map(|&(theta, d)| json!({ "theta": num(theta), "density": num(d) }))
            .collect::<Vec<_>>(),
    });
    let env = Envelope {
        command: "density",
        inputs,
        result,
        warnings: vec![],
    };
    Ok((env, csv, 0))
}

fn cmd_identity(a: IdentityArgs, env: &Env) -> CmdResult {
    let mut inputs = Map::new();
    let cd = a.evidence.resolve(&mut inputs)?;
    if a.a1 > a.a2 {
        return Err(format!("--a1 ({}) must not exceed --a2 ({})", a.a1, a.a2));
    }
    if a.a1 < cd.support_min() {
        return Err(format!(
            "--a1 ({}) must be >= {} for --dist poisson",
            a.a1,
            cd.support_min()
        ));
    }
    inputs.insert("a1".into(), num(a.a1));
    inputs.insert("a2".into(), num(a.a2));

    let mut warnings = Vec::new();
    let env_tol = match &env.quad_tol {
        Some(raw) => {
            let v = positive(raw).map_err(|e| format!("{QUAD_TOL_VAR} {e}, got '{raw}'"))?;
            inputs.insert(QUAD_TOL_VAR.into(), num(v));
            Some(v)
        }
        None => None,
    };
    let (method, pass_default) = match a.method {
        Method::Closed => {
            if env_tol.is_some() {
                warnings.push(format!("{QUAD_TOL_VAR} has no effect with --method closed"));
            }
            inputs.insert("method".into(), json!("closed"));
            (IdentityMethod::ClosedForm, CLOSED_PASS_TOL)
        }
        Method::Quad => {
            let q = env_tol.unwrap_or(DEFAULT_TOL);
            inputs.insert("method".into(), json!("quad"));
            inputs.insert("quad_tol".into(), num(q));
            (IdentityMethod::Quadrature { tol: q }, QUAD_PASS_TOL)
        }
    };
    let tol = a.tol.unwrap_or(pass_default);
    inputs.insert("tol".into(), num(tol));
    inputs.insert("format".into(), json!(format_name(a.format)));

    let t = identity_terms(&cd, a.a1, a.a2, method).map_err(core_err)?;
    let pass = t.residual <= tol;
    let result = json!({
        "t1": num(t.t1),
        "t2": num(t.t2),
        "t3": num(t.t3),
        "sum": num(t.sum),
        "residual": num(t.residual),
        "pass": pass,
    });
    let csv = (a.format == Format::Csv).then(|| {
        let mut tab = Table::new(&["t1", "t2", "t3", "sum", "residual", "pass"]);
        tab.row([
            num_text(t.t1),
            num_text(t.t2),
            num_text(t.t3),
            num_text(t.sum),
            num_text(t.residual),
            pass.to_string(),
        ]);
        tab.finish()
    });
    let envelope = Envelope {
        command: "identity",
        inputs,
        result,
        warnings,
    };
    Ok((envelope, csv, if pass { 0 } else { 1 }))
}

fn cmd_coverage(a: CoverageArgs) -> CmdResult {
    let mut inputs = Map::new();
    let family = a.dist.family();
    inputs.insert("dist".into(), json!(family.name()));
    let model = match family.location_family() {
        Some(loc) => {
            if a.lambda.is_some() {
                return Err("--lambda applies only to --dist poisson; use --a".into());
            }
            let truth =
                a.a.ok_or_else(|| format!("--a is required for --dist {}", family.name()))?;
            let scale = a
                .scale
                .ok_or_else(|| format!("--scale is required for --dist {}", family.name()))?;
            inputs.insert("a".into(), num(truth));
            inputs.insert("scale".into(), num(scale));
            TrueModel::Location {
                family: loc,
                params: LocScaleParams::new(truth, scale).map_err(core_err)?,
            }
        }
        None => {
            if a.a.is_some() {
                return Err("--a does not apply to --dist poisson; use --lambda".into());
            }
            if a.scale.is_some() {
                return Err("--scale does not apply to --dist poisson".into());
            }
            let mean = a.lambda.ok_or("--lambda is required for --dist poisson")?;
            inputs.insert("lambda".into(), num(mean));
            TrueModel::Poisson { mean }
        }
    };
    let kind = a.kind.interval_kind();
    inputs.insert("level".into(), num(a.level));
    inputs.insert("kind".into(), json!(kind.name()));
    inputs.insert("trials".into(), json!(a.trials));
    inputs.insert("seed".into(), json!(a.seed));
    inputs.insert("workers".into(), json!(a.workers));
    inputs.insert("format".into(), json!(format_name(a.format)));

    let spec = ExperimentSpec {
        model,
        level: a.level,
        kind,
        trials: a.trials,
        seed: a.seed,
        workers: usize::try_from(a.workers).map_err(|_| "--workers is too large".to_string())?,
    };
    let mut warnings = Vec::new();
    if a.workers > spec.blocks() {
        warnings.push(format!(
            "only {} block(s) of trials; extra workers are idle",
            spec.blocks()
        ));
    }
    let r = coverage::run_coverage(&spec).map_err(core_err)?;

    let mut result = Map::new();
    result.insert("trials".into(), json!(r.trials));
    result.insert("hits".into(), json!(r.hits));
    result.insert("coverage".into(), num(r.coverage));
    result.insert("binom_se".into(), num(r.binom_se));
    for (key, v) in [
        ("mean_width", r.mean_width),
        ("min_width", r.min_width),
        ("max_width", r.max_width),
    ] {
        if let Some(v) = v {
            result.insert(key.into(), num(v));
        }
    }
    result.insert("seed".into(), json!(r.seed));

    let csv = (a.format == Format::Csv).then(|| {
        let opt = |v: Option<f64>| v.map(num_text).unwrap_or_default();
        let mut t = Table::new(&[
            "trials",
            "hits",
            "coverage",
            "binom_se",
            "mean_width",
            "min_width",
            "max_width",
            "seed",
        ]);
        t.row([
            r.trials.to_string(),
            r.hits.to_string(),
            num_text(r.coverage),
            num_text(r.binom_se),
            opt(r.mean_width),
            opt(r.min_width),
            opt(r.max_width),
            r.seed.to_string(),
        ]);
        t.finish()
    });
    let env = Envelope {
        command: "coverage",
        inputs,
        result: Value::Object(result),
        warnings,
    };
    Ok((env, csv, 0))
}

enum Sampler {
    Location(LocationFamily, LocScaleParams),
    Poisson(f64),
}

fn cmd_sample(a: SampleArgs) -> CmdResult {
    let mut inputs = Map::new();
    let family = a.dist.family();
    inputs.insert("dist".into(), json!(family.name()));
    let sampler = match family.location_family() {
        Some(loc) => {
            if a.mean.is_some() {
                return Err("--mean applies only to --dist poisson".into());
            }
            let location = a
                .location
                .ok_or_else(|| format!("--location is required for --dist {}", family.name()))?;
            let scale = a
                .scale
                .ok_or_else(|| format!("--scale is required for --dist {}", family.name()))?;
            inputs.insert("location".into(), num(location));
            inputs.insert("scale".into(), num(scale));
            Sampler::Location(loc, LocScaleParams::new(location, scale).map_err(core_err)?)
        }
        None => {
            if a.location.is_some() || a.scale.is_some() {
                return Err("--location and --scale do not apply to --dist poisson".into());
            }
            let mean = a.mean.ok_or("--mean is required for --dist poisson")?;
            inputs.insert("mean".into(), num(mean));
            Sampler::Poisson(mean)
        }
    };
    inputs.insert("n".into(), json!(a.n));
    inputs.insert("seed".into(), json!(a.seed));
    inputs.insert("format".into(), json!(format_name(a.format)));

    let mut values = Vec::with_capacity(a.n as usize);
    let mut cells = Vec::with_capacity(a.n as usize);
    for i in 0..a.n {
        let u = Probability::new(trial_uniform(a.seed, i)).map_err(core_err)?;
        match sampler {
            Sampler::Location(f, p) => {
                let x = f.sample(&p, u).map_err(core_err)?;
                values.push(num(x));
                cells.push(num_text(x));
            }
            Sampler::Poisson(mean) => {
                let k = poisson_sample(mean, u).map_err(core_err)?;
                values.push(json!(k));
                cells.push(k.to_string());
            }
        }
    }
    let csv = (a.format == Format::Csv).then(|| {
        let mut t = Table::new(&["value"]);
        for c in &cells {
            t.row([c]);
        }
        t.finish()
    });
    let env = Envelope {
        command: "sample",
        inputs,
        result: json!({ "values": values }),
        warnings: vec![],
    };
    Ok((env, csv, 0))
}
