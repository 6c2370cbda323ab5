//! `flatfront`: analyze flat fronts from their hyperbolic Gauss maps.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use flatfront::catalog::{self, CatalogError, CatalogFront};
use flatfront::elliptic::EllipticError;
use flatfront::expr::{parse_constant, parse_rational, Bindings};
use flatfront::front::{
    mesh, period_check, FrontError, FrontGeometry, FrontSpec, PreparedFront, SamplingPlan, Window,
    DEFAULT_RESOLUTION,
};
use flatfront::report::{analyze, parse_ends, AnalysisError, Report, SpecEcho};
use serde::Deserialize;

const EXIT_INVALID: u8 = 2;
const EXIT_PERIOD: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "flatfront", version, about = "Flat fronts in hyperbolic 3-space from their Gauss maps")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Built-in examples.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
    /// Analyze a pair of rational Gauss maps.
    Analyze(InputArgs),
    /// Export OBJ meshes of a front and its parallel fronts.
    Mesh(MeshArgs),
}

#[derive(Subcommand, Debug)]
enum CatalogAction {
    /// List entries with their parameters.
    List,
    /// Run the full analysis of an entry.
    Run {
        name: String,
        #[command(flatten)]
        input: InputArgs,
        /// Compare the report with the entry's fixture and print the result to stderr.
        #[arg(long)]
        check: bool,
    },
}

#[derive(Args, Debug, Default, Clone)]
struct InputArgs {
    /// Key-value config file (TOML); flags override its entries.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    gauss: Option<String>,
    #[arg(long = "gauss-star")]
    gauss_star: Option<String>,
    /// Parameter binding `name=value`; repeatable.
    #[arg(long = "param", value_name = "NAME=VALUE")]
    params: Vec<String>,
    /// Extra ends as a comma list; `inf` is allowed.
    #[arg(long, allow_hyphen_values = true)]
    ends: Option<String>,
    /// Modulus of the scale constant.
    #[arg(long)]
    scale: Option<f64>,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct MeshArgs {
    /// Sample a catalog entry instead of `--gauss`/`--gauss-star`.
    #[arg(long)]
    catalog: Option<String>,
    #[command(flatten)]
    input: InputArgs,
    /// Parameter window `x0,x1,y0,y1`.
    #[arg(long, allow_hyphen_values = true)]
    window: Option<String>,
    #[arg(long)]
    resolution: Option<usize>,
    /// Comma list of parallel-front distances.
    #[arg(long, allow_hyphen_values = true)]
    t: Option<String>,
    /// Output OBJ path; several `t` values give `<stem>_t<index>.obj`.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Config file contents; every key mirrors a flag.
#[derive(Deserialize, Debug, Default)]
#[serde(deny_unknown_fields)]
struct Config {
    catalog: Option<String>,
    gauss: Option<String>,
    gauss_star: Option<String>,
    #[serde(default)]
    params: BTreeMap<String, String>,
    ends: Option<String>,
    scale: Option<f64>,
    json: Option<PathBuf>,
    window: Option<String>,
    resolution: Option<usize>,
    t: Option<String>,
    out: Option<PathBuf>,
}

/// Flags merged over the config file.
#[derive(Debug, Default)]
struct Settings {
    catalog: Option<String>,
    gauss: Option<String>,
    gauss_star: Option<String>,
    params: Bindings,
    ends: Option<String>,
    scale: f64,
    json: Option<PathBuf>,
    window: Option<String>,
    resolution: Option<usize>,
    t: Option<String>,
    out: Option<PathBuf>,
}

/// An error that maps to the "input invalid" exit code.
#[derive(Debug)]
struct InvalidInput(anyhow::Error);

impl std::fmt::Display for InvalidInput {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:#}", self.0)
    }
}

impl std::error::Error for InvalidInput {}

fn invalid(e: impl Into<anyhow::Error>) -> anyhow::Error {
    InvalidInput(e.into()).into()
}

fn parse_param(text: &str) -> Result<(String, flatfront::algebra::GaussianRational)> {
    let (name, value) = text
        .split_once('=')
        .ok_or_else(|| invalid(anyhow!("parameter `{text}` is not of the form name=value")))?;
    let value = parse_constant(value.trim()).map_err(|e| invalid(anyhow!("parameter {name}: {e}")))?;
    Ok((name.trim().to_string(), value))
}

fn settings(input: &InputArgs, mesh: Option<&MeshArgs>) -> Result<Settings> {
    let config = match &input.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            toml::from_str::<Config>(&text).map_err(|e| invalid(anyhow!("config {}: {e}", path.display())))?
        }
        None => Config::default(),
    };
    let mut params = Bindings::new();
    for (k, v) in &config.params {
        let (name, value) = parse_param(&format!("{k}={v}"))?;
        params.insert(name, value);
    }
    for p in &input.params {
        let (name, value) = parse_param(p)?;
        params.insert(name, value);
    }
    let scale = input.scale.or(config.scale).unwrap_or(1.0);
    Ok(Settings {
        catalog: mesh.and_then(|m| m.catalog.clone()).or(config.catalog),
        gauss: input.gauss.clone().or(config.gauss),
        gauss_star: input.gauss_star.clone().or(config.gauss_star),
        params,
        ends: input.ends.clone().or(config.ends),
        scale,
        json: input.json.clone().or(config.json),
        window: mesh.and_then(|m| m.window.clone()).or(config.window),
        resolution: mesh.and_then(|m| m.resolution).or(config.resolution),
        t: mesh.and_then(|m| m.t.clone()).or(config.t),
        out: mesh.and_then(|m| m.out.clone()).or(config.out),
    })
}

fn is_period_failure(e: &AnalysisError) -> bool {
    matches!(
        e,
        AnalysisError::Front(FrontError::PeriodFailed) | AnalysisError::Elliptic(EllipticError::PeriodFailed(_))
    )
}

fn classify(e: AnalysisError) -> anyhow::Error {
    if is_period_failure(&e) {
        anyhow!(e)
    } else {
        invalid(e)
    }
}

fn classify_catalog(e: CatalogError) -> anyhow::Error {
    match e {
        CatalogError::Analysis(a) => classify(a),
        other => invalid(other),
    }
}

fn write_report(report: &Report, json: Option<&Path>) -> Result<()> {
    let text = report.to_json();
    match json {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn finish(report: &Report, json: Option<&Path>) -> Result<u8> {
    write_report(report, json)?;
    if report.period_verdict() {
        Ok(0)
    } else {
        if let Report::Rational(r) = report {
            for p in r.period.poles.iter().filter(|p| !p.residue_is_real) {
                eprintln!("period condition fails: residue {} at {} is not real", p.residue, p.location);
            }
        }
        eprintln!("no flat front exists for this input; the diagnostic report was still written");
        Ok(EXIT_PERIOD)
    }
}

fn catalog_list() -> Result<u8> {
    for e in catalog::entries() {
        let params: Vec<String> = e
            .params
            .iter()
            .map(|p| format!("{}={}", p.name, p.default))
            .collect();
        let params = if params.is_empty() { "-".to_string() } else { params.join(" ") };
        println!("{:<14} {:<10} {}", e.name, params, e.description);
    }
    Ok(0)
}

fn catalog_run(name: &str, input: &InputArgs, check: bool) -> Result<u8> {
    let s = settings(input, None)?;
    let entry = catalog::find(name).map_err(invalid)?;
    let report = entry.run(&s.params, s.scale).map_err(classify_catalog)?;
    if check {
        if !entry.is_default(&s.params) {
            eprintln!("fixture applies to default parameters only; skipped");
        } else {
            for c in entry.check(&report) {
                eprintln!(
                    "{} {} expected {} got {} ({:?})",
                    if c.pass { "PASS" } else { "FAIL" },
                    c.key,
                    c.expected,
                    c.actual.as_deref().unwrap_or("missing"),
                    c.provenance
                );
            }
        }
    }
    finish(&report, s.json.as_deref())
}

fn user_spec(s: &Settings) -> Result<(FrontSpec, SpecEcho)> {
    let g = s.gauss.as_deref().ok_or_else(|| invalid(anyhow!("--gauss is required")))?;
    let gs = s
        .gauss_star
        .as_deref()
        .ok_or_else(|| invalid(anyhow!("--gauss-star is required")))?;
    let extra = parse_ends(s.ends.as_deref().unwrap_or("")).map_err(invalid)?;
    let gm = parse_rational(g, &s.params).map_err(invalid)?;
    let gsm = parse_rational(gs, &s.params).map_err(invalid)?;
    let spec = FrontSpec::new(gm, gsm, s.scale, &extra).map_err(invalid)?;
    let echo = SpecEcho::new(g, gs, &s.params, s.scale, 0, spec.ends.iter().map(ToString::to_string).collect());
    Ok((spec, echo))
}

fn analyze_cmd(input: &InputArgs) -> Result<u8> {
    let s = settings(input, None)?;
    let g = s.gauss.as_deref().ok_or_else(|| invalid(anyhow!("--gauss is required")))?;
    let gs = s
        .gauss_star
        .as_deref()
        .ok_or_else(|| invalid(anyhow!("--gauss-star is required")))?;
    let extra = parse_ends(s.ends.as_deref().unwrap_or("")).map_err(invalid)?;
    let report = analyze(g, gs, &s.params, &extra, s.scale).map_err(classify)?;
    finish(&Report::Rational(Box::new(report)), s.json.as_deref())
}

fn parse_list(text: &str, what: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|x| x.trim().parse::<f64>().map_err(|_| invalid(anyhow!("{what}: `{x}` is not a number"))))
        .collect()
}

fn output_paths(out: &Path, count: usize) -> Vec<PathBuf> {
    if count == 1 {
        return vec![out.to_path_buf()];
    }
    let stem = out.file_stem().and_then(|s| s.to_str()).unwrap_or("mesh");
    (0..count)
        .map(|i| out.with_file_name(format!("{stem}_t{i}.obj")))
        .collect()
}

fn write_meshes(front: &impl FrontGeometry, s: &Settings, default_window: Window, echo: &SpecEcho) -> Result<u8> {
    let window = match &s.window {
        Some(w) => {
            let v = parse_list(w, "--window")?;
            if v.len() != 4 {
                bail!(invalid(anyhow!("--window needs four numbers x0,x1,y0,y1")));
            }
            Window::new(v[0], v[1], v[2], v[3]).map_err(invalid)?
        }
        None => default_window,
    };
    let ts = parse_list(s.t.as_deref().unwrap_or("0"), "--t")?;
    let out = s.out.clone().ok_or_else(|| invalid(anyhow!("--out is required")))?;
    let resolution = s.resolution.unwrap_or(DEFAULT_RESOLUTION);
    let plan = SamplingPlan::Window(window);
    let echo = serde_json::to_value(echo)?;
    for (t, path) in ts.iter().zip(output_paths(&out, ts.len())) {
        let m = mesh(front, &plan, resolution, *t, None).map_err(invalid)?;
        m.write(&path, echo.clone())
            .with_context(|| format!("writing {}", path.display()))?;
        println!("{}", path.display());
    }
    Ok(0)
}

fn mesh_cmd(args: &MeshArgs) -> Result<u8> {
    let s = settings(&args.input, Some(args))?;
    if let Some(name) = &s.catalog {
        let entry = catalog::find(name).map_err(invalid)?;
        let (front, echo) = entry.front(&s.params, s.scale).map_err(classify_catalog)?;
        return match front {
            CatalogFront::Rational(f) => write_meshes(f.as_ref(), &s, Window::square(2.0), &echo),
            CatalogFront::Torus(f) => {
                write_meshes(f.as_ref(), &s, Window::new(0.0, 1.0, 0.0, 1.0)?, &echo)
            }
        };
    }
    let (spec, echo) = user_spec(&s)?;
    let period = period_check(&spec.g, &spec.g_star).map_err(invalid)?;
    if !period.verdict {
        eprintln!("period condition fails; no mesh written");
        return Ok(EXIT_PERIOD);
    }
    let front = PreparedFront::new(&spec).map_err(invalid)?;
    write_meshes(&front, &s, Window::square(2.0), &echo)
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Catalog { action } => match action {
            CatalogAction::List => catalog_list(),
            CatalogAction::Run { name, input, check } => catalog_run(&name, &input, check),
        },
        Command::Analyze(input) => analyze_cmd(&input),
        Command::Mesh(args) => mesh_cmd(&args),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<InvalidInput>().is_some() {
                ExitCode::from(EXIT_INVALID)
            } else if e.downcast_ref::<AnalysisError>().is_some_and(is_period_failure) {
                ExitCode::from(EXIT_PERIOD)
            } else {
                ExitCode::FAILURE
            }
        }
    }
}
