//! Command-line front end.
//!
//! Exit status: 0 on success, 1 when `enumerate` finds a mismatch, 2 on
//! input errors.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use thiserror::Error;

use crate::classify::{self, ClassifyError};
use crate::expkernel::{parse, ParseError};
use crate::geometry::{builtin, parse_metric_file, GeometryError, GeometryName, MetricSpec};
use crate::matrix::{MatrixError, RatMatrix};
use crate::rational::{is_integer, parse_rational, Rational};
use crate::tension::{PolyMap, TensionError, DEFAULT_STEP};

pub const THREADS_ENV: &str = "INFHARM_THREADS";

#[derive(Debug, Parser)]
#[command(name = "infharm", version, about = "Exact checks for linear ∞-harmonic maps between model geometries")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, clap::Args)]
pub struct Common {
    /// euclidean:<n>, heisenberg, nil, sol, or file:<metric.toml>
    #[arg(long)]
    pub domain: String,
    #[arg(long)]
    pub target: String,
    /// Output path; standard output when absent or "-"
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact residual, energy density, families and numeric cross-check
    Check {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        matrix: PathBuf,
    },
    /// Family membership (classified pairs only)
    Classify {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        matrix: PathBuf,
    },
    /// Energy density and pullback metric
    Energy {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        matrix: PathBuf,
    },
    /// Pullback metric against the domain metric
    Isometry {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        matrix: PathBuf,
    },
    /// Residual against family membership over a grid
    Enumerate {
        #[command(flatten)]
        common: Common,
        /// Comma-separated rationals, e.g. "-1,0,1" or "-1/2,0,1/2"
        #[arg(long, allow_hyphen_values = true)]
        grid: String,
    },
    /// Rank and energy-constancy audit over a grid
    Audit {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        grid: String,
    },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("malformed matrix: {0}")]
    Matrix(String),
    #[error(transparent)]
    MatrixShape(#[from] MatrixError),
    #[error("component {index}: {source}")]
    Component { index: usize, source: ParseError },
    #[error("grid: {0}")]
    Grid(String),
    #[error("{THREADS_ENV} must be a positive integer, got {0:?}")]
    Threads(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Tension(#[from] TensionError),
    #[error(transparent)]
    Classify(#[from] ClassifyError),
}

/// What a run produced.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub value: Value,
    pub text: String,
    pub status: i32,
}

/// Parses a matrix file: a JSON array of rows whose entries are integers,
/// decimals (read exactly) or `"p/q"` strings.
pub fn parse_matrix_json(text: &str) -> Result<RatMatrix, CliError> {
    let value: Value = serde_json::from_str(text).map_err(|e| CliError::Matrix(e.to_string()))?;
    let rows = value
        .as_array()
        .ok_or_else(|| CliError::Matrix("expected an array of rows".into()))?;
    let rows = rows
        .iter()
        .map(|row| {
            row.as_array()
                .ok_or_else(|| CliError::Matrix("expected an array of rows".into()))?
                .iter()
                .map(json_rational)
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(RatMatrix::from_rows(rows)?)
}

fn json_rational(v: &Value) -> Result<Rational, CliError> {
    let text = match v {
        Value::Number(n) => n.to_string(),
        Value::String(s) => s.clone(),
        other => return Err(CliError::Matrix(format!("entry {other} is not a number"))),
    };
    parse_rational(&text).map_err(|e| CliError::Matrix(e.to_string()))
}

/// Integers as JSON numbers, everything else as `"p/q"`.
pub fn write_matrix_json(a: &RatMatrix) -> String {
    let rows: Vec<Value> = a
        .to_rows()
        .iter()
        .map(|r| {
            Value::Array(
                r.iter()
                    .map(|v| {
                        if is_integer(v) {
                            Value::Number(v.to_string().parse().expect("integer literal"))
                        } else {
                            Value::String(v.to_string())
                        }
                    })
                    .collect(),
            )
        })
        .collect();
    serde_json::to_string(&Value::Array(rows)).expect("json value")
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

fn load_space(name: &str) -> Result<Arc<MetricSpec>, CliError> {
    let spec = match name.strip_prefix("file:") {
        Some(path) => parse_metric_file(&read(Path::new(path))?)?,
        None => builtin(name.parse::<GeometryName>()?)?,
    };
    Ok(Arc::new(spec))
}

/// A matrix file, or a JSON array of component expressions for polynomial maps.
fn load_map(path: &Path, domain: Arc<MetricSpec>, target: Arc<MetricSpec>) -> Result<PolyMap, CliError> {
    let text = read(path)?;
    let value: Value = serde_json::from_str(&text).map_err(|e| CliError::Matrix(e.to_string()))?;
    let components = value.as_array().filter(|a| a.iter().all(Value::is_string));
    match components {
        Some(items) if !items.is_empty() => {
            let comps = items
                .iter()
                .enumerate()
                .map(|(index, s)| {
                    parse(s.as_str().unwrap_or_default(), domain.coords())
                        .map_err(|source| CliError::Component { index, source })
                })
                .collect::<Result<Vec<_>, _>>()?;
            Ok(PolyMap::polynomial(domain, target, comps)?)
        }
        _ => Ok(PolyMap::linear(domain, target, &parse_matrix_json(&text)?)?),
    }
}

pub fn parse_grid(text: &str) -> Result<Vec<Rational>, CliError> {
    text.split(',')
        .map(|s| parse_rational(s).map_err(|e| CliError::Grid(e.to_string())))
        .collect()
}

pub fn threads_from_env() -> Result<Option<usize>, CliError> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(None),
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(CliError::Threads(s)),
        },
    }
}

fn classified_names(d: &MetricSpec, t: &MetricSpec) -> Option<(GeometryName, GeometryName)> {
    let pair = (d.kind()?, t.kind()?);
    classify::pair_kind(pair.0, pair.1).ok().map(|_| pair)
}

/// Largest `|τ_i|` from the finite-difference oracle at ten seeded points in `[-2, 2]^m`.
pub fn numeric_residual_max(map: &PolyMap) -> Result<f64, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x1f_2e_3d);
    let mut worst: f64 = 0.0;
    for _ in 0..10 {
        let p: Vec<f64> = (0..map.domain().dim()).map(|_| rng.gen_range(-2.0..=2.0)).collect();
        for r in map.numeric_residual(&p, DEFAULT_STEP)? {
            worst = worst.max(r.abs());
        }
    }
    Ok(worst)
}

fn render_matrix(m: &[Vec<crate::expkernel::ExpPoly>]) -> Value {
    Value::Array(
        m.iter()
            .map(|r| Value::Array(r.iter().map(|e| Value::String(e.render())).collect()))
            .collect(),
    )
}

fn check_value(map: &PolyMap, families: Option<Vec<String>>) -> Result<Value, CliError> {
    let report = map.tau_infinity()?;
    let mut v = json!({
        "harmonic": report.harmonic,
        "tau": report.tau.iter().map(|t| t.render()).collect::<Vec<_>>(),
        "energy": report.energy.render(),
        "constant_energy": report.constant_energy,
        "families": families.unwrap_or_default(),
        "numeric_residual_max": numeric_residual_max(map)?,
    });
    if let Some(m) = map.matrix() {
        v["matrix"] = serde_json::from_str(&write_matrix_json(m)).expect("own output");
    }
    Ok(v)
}

fn family_ids(map: &PolyMap) -> Result<Option<Vec<String>>, CliError> {
    let (Some((d, t)), Some(a)) = (classified_names(map.domain(), map.target()), map.matrix()) else {
        return Ok(None);
    };
    Ok(Some(classify::classify(a, d, t)?.iter().map(|f| f.id.to_string()).collect()))
}

fn grid_pair(common: &Common) -> Result<(GeometryName, GeometryName), CliError> {
    Ok((common.domain.parse()?, common.target.parse()?))
}

/// Executes one command without touching the output stream.
pub fn execute(command: &Command) -> Result<Outcome, CliError> {
    let ok = |value: Value| Outcome {
        text: value_text(&value),
        value,
        status: 0,
    };
    match command {
        Command::Check { common, matrix } => {
            let map = load_map(matrix, load_space(&common.domain)?, load_space(&common.target)?)?;
            Ok(ok(check_value(&map, family_ids(&map)?)?))
        }
        Command::Classify { common, matrix } => {
            let (d, t) = grid_pair(common)?;
            classify::pair_kind(d, t)?;
            let map = load_map(matrix, Arc::new(builtin(d)?), Arc::new(builtin(t)?))?;
            let a = map
                .matrix()
                .ok_or_else(|| CliError::Matrix("classify needs a linear map".into()))?;
            let ids = classify::classify(a, d, t)?.iter().map(|f| f.id.to_string()).collect();
            Ok(ok(check_value(&map, Some(ids))?))
        }
        Command::Energy { common, matrix } => {
            let map = load_map(matrix, load_space(&common.domain)?, load_space(&common.target)?)?;
            let report = map.tau_infinity()?;
            Ok(ok(json!({
                "energy": report.energy.render(),
                "constant_energy": report.constant_energy,
                "pullback": render_matrix(&map.pullback_metric()?),
            })))
        }
        Command::Isometry { common, matrix } => {
            let map = load_map(matrix, load_space(&common.domain)?, load_space(&common.target)?)?;
            Ok(ok(json!({
                "isometry": map.is_isometry()?,
                "pullback": render_matrix(&map.pullback_metric()?),
                "domain_metric": render_matrix(map.domain().metric()),
            })))
        }
        Command::Enumerate { common, grid } => {
            let (d, t) = grid_pair(common)?;
            let report = classify::enumerate_equivalence(d, t, &parse_grid(grid)?, threads_from_env()?)?;
            Ok(Outcome {
                value: serde_json::to_value(&report).expect("serializable report"),
                text: report.render_text(),
                status: if report.is_clean() { 0 } else { 1 },
            })
        }
        Command::Audit { common, grid } => {
            let (d, t) = grid_pair(common)?;
            let values = parse_grid(grid)?;
            let threads = threads_from_env()?;
            let rank = classify::rank_audit(d, t, &values, threads)?;
            let energy = classify::energy_constancy_audit(d, t, &values, threads)?;
            Ok(ok(json!({
                "rank": rank,
                "energy": energy,
                "every_rank2_nonconstant": energy.every_rank2_nonconstant(),
                "full_rank_constant_non_isometric": energy.full_rank_constant_non_isometric_exists(),
            })))
        }
    }
}

fn value_text(v: &Value) -> String {
    fn walk(prefix: &str, v: &Value, out: &mut String) {
        match v {
            Value::Object(map) => {
                for (k, inner) in map {
                    let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                    walk(&key, inner, out);
                }
            }
            Value::Array(items) if items.iter().all(|i| !i.is_object()) => {
                let _ = writeln!(out, "{prefix}: {}", compact(v));
            }
            Value::Array(items) => {
                for (i, inner) in items.iter().enumerate() {
                    walk(&format!("{prefix}[{i}]"), inner, out);
                }
            }
            Value::String(s) => {
                let _ = writeln!(out, "{prefix}: {s}");
            }
            other => {
                let _ = writeln!(out, "{prefix}: {other}");
            }
        }
    }
    fn compact(v: &Value) -> String {
        match v {
            Value::Array(items) => format!("[{}]", items.iter().map(compact).collect::<Vec<_>>().join(", ")),
            Value::String(s) => s.clone(),
            other => other.to_string(),
        }
    }
    let mut out = String::new();
    walk("", v, &mut out);
    out
}

fn common(command: &Command) -> &Common {
    match command {
        Command::Check { common, .. }
        | Command::Classify { common, .. }
        | Command::Energy { common, .. }
        | Command::Isometry { common, .. }
        | Command::Enumerate { common, .. }
        | Command::Audit { common, .. } => common,
    }
}

/// Runs a parsed command line, writes the result, and returns the exit status.
pub fn run(cli: &Cli) -> i32 {
    let opts = common(&cli.command);
    match execute(&cli.command) {
        Ok(outcome) => {
            let body = match opts.format {
                Format::Json => {
                    let mut s = serde_json::to_string_pretty(&outcome.value).expect("json value");
                    s.push('\n');
                    s
                }
                Format::Text => outcome.text,
            };
            let written = match &opts.output {
                Some(p) if p.as_os_str() != "-" => std::fs::write(p, body).map_err(|e| CliError::Io {
                    path: p.display().to_string(),
                    message: e.to_string(),
                }),
                _ => {
                    print!("{body}");
                    Ok(())
                }
            };
            match written {
                Ok(()) => outcome.status,
                Err(e) => {
                    eprintln!("error: {e}");
                    2
                }
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}
