//! Config resolution: defaults ← JSON config file ← command-line flags.

use std::fmt;
use std::fs;
use std::path::PathBuf;

use quadsym_core::error::AlgebraError;
use quadsym_core::value::Scalar;
use serde::Deserialize;

use crate::{CommonArgs, Format, ModelKind};

/// Everything that can go wrong outside the math itself.
#[derive(Debug)]
pub enum CliError {
    Config(String),
    Algebra(AlgebraError),
    Io(std::io::Error),
}

impl CliError {
    /// 2 for configuration problems, 3 for resource-cap aborts.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Algebra(AlgebraError::CapExceeded { .. }) => 3,
            _ => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(msg) => write!(f, "{msg}"),
            CliError::Algebra(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "{e}"),
        }
    }
}

impl From<AlgebraError> for CliError {
    fn from(e: AlgebraError) -> Self {
        CliError::Algebra(e)
    }
}

/// One model parameter: either left symbolic (verify) or an exact number.
#[derive(Clone, Debug)]
pub enum Param {
    Symbolic,
    Value(Scalar),
}

impl Param {
    pub fn scalar(&self) -> &Scalar {
        match self {
            Param::Value(s) => s,
            Param::Symbolic => unreachable!("numeric access checked at resolve time"),
        }
    }

    pub fn echo(&self) -> String {
        match self {
            Param::Symbolic => "symbolic".into(),
            Param::Value(s) => s.as_exact_str().unwrap_or_else(|| s.to_sig_string(15)),
        }
    }
}

/// Raw JSON config document. Every key is optional; unknown keys are
/// rejected so typos cannot silently fall back to defaults.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    model: Option<String>,
    dim: Option<u32>,
    split: Option<u32>,
    c0: Option<serde_json::Value>,
    c1: Option<serde_json::Value>,
    c2: Option<serde_json::Value>,
    omega: Option<serde_json::Value>,
    hbar: Option<serde_json::Value>,
    p_max: Option<u32>,
    levels: Option<u32>,
    grid: Option<usize>,
    rmax: Option<f64>,
    tol: Option<f64>,
    out: Option<PathBuf>,
    format: Option<String>,
}

/// Whether a command works on symbols or numbers; mixing is a config error.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Symbolic,
    Numeric,
}

/// Fully resolved, validated run configuration.
#[derive(Debug)]
pub struct RunConfig {
    pub command: &'static str,
    pub mode: Mode,
    pub model: ModelKind,
    pub dim: u32,
    pub split: u32,
    pub c0: Param,
    pub c1: Param,
    pub c2: Param,
    pub omega: Param,
    pub hbar: Param,
    pub p_max: u32,
    pub levels: u32,
    pub grid: usize,
    pub rmax: Option<f64>,
    pub tol: f64,
    pub out: Option<PathBuf>,
    pub format: Format,
}

fn parse_numeric(key: &str, text: &str) -> Result<Scalar, CliError> {
    let parsed = if let Some((n, d)) = text.split_once('/') {
        match (n.trim().parse::<i64>(), d.trim().parse::<i64>()) {
            (Ok(n), Ok(d)) if d != 0 => Some(Scalar::from_ratio(n, d)),
            _ => None,
        }
    } else {
        Scalar::parse_decimal(text)
    };
    parsed.ok_or_else(|| {
        CliError::Config(format!(
            "parameter '{key}': expected a decimal number, a fraction like 3/2, \
             or \"symbolic\", got '{text}'"
        ))
    })
}

fn parse_param(key: &str, text: &str) -> Result<Param, CliError> {
    if text == "symbolic" {
        Ok(Param::Symbolic)
    } else {
        parse_numeric(key, text).map(Param::Value)
    }
}

fn param_from_json(key: &str, v: &serde_json::Value) -> Result<Param, CliError> {
    match v {
        // The shortest round-trip rendering recovers the literal the user
        // wrote for any reasonable decimal, so 0.5 becomes exactly 1/2.
        serde_json::Value::Number(n) => parse_numeric(key, &n.to_string()).map(Param::Value),
        serde_json::Value::String(s) => parse_param(key, s),
        other => Err(CliError::Config(format!(
            "parameter '{key}': expected a number or string, got {other}"
        ))),
    }
}

/// Merge precedence for one parameter slot.
fn resolve_param(
    key: &str,
    flag: &Option<String>,
    file: &Option<serde_json::Value>,
    default: Param,
) -> Result<Param, CliError> {
    if let Some(text) = flag {
        parse_param(key, text)
    } else if let Some(v) = file {
        param_from_json(key, v)
    } else {
        Ok(default)
    }
}

fn check_mode(cfg: &RunConfig) -> Result<(), CliError> {
    let slots = [
        ("c0", &cfg.c0),
        ("c1", &cfg.c1),
        ("c2", &cfg.c2),
        ("omega", &cfg.omega),
        ("hbar", &cfg.hbar),
    ];
    for (key, p) in slots {
        match (cfg.mode, p) {
            (Mode::Symbolic, Param::Value(_)) => {
                return Err(CliError::Config(format!(
                    "'{}' runs symbolically; numeric parameter '{key}' is a \
                     config error (drop it or set it to \"symbolic\")",
                    cfg.command
                )));
            }
            (Mode::Numeric, Param::Symbolic) => {
                return Err(CliError::Config(format!(
                    "'{}' needs numeric parameters; '{key}' is symbolic",
                    cfg.command
                )));
            }
            _ => {}
        }
    }
    Ok(())
}

pub fn resolve(command: &'static str, args: &CommonArgs) -> Result<RunConfig, CliError> {
    let file: FileConfig = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(CliError::Io)?;
            serde_json::from_str(&text)
                .map_err(|e| CliError::Config(format!("config {}: {e}", path.display())))?
        }
        None => FileConfig::default(),
    };

    let model = match (args.model, file.model.as_deref()) {
        (Some(m), _) => m,
        (None, Some("kc")) => ModelKind::Kc,
        (None, Some("dso")) => ModelKind::Dso,
        (None, Some(other)) => {
            return Err(CliError::Config(format!(
                "config: unknown model '{other}' (expected kc or dso)"
            )))
        }
        (None, None) => return Err(CliError::Config("--model is required".into())),
    };

    let format = match (args.format, file.format.as_deref()) {
        (Some(f), _) => f,
        (None, Some("json")) => Format::Json,
        (None, Some("csv")) => Format::Csv,
        (None, Some(other)) => {
            return Err(CliError::Config(format!(
                "config: unknown format '{other}' (expected json or csv)"
            )))
        }
        (None, None) => Format::Json,
    };

    let mode = if command == "verify" {
        Mode::Symbolic
    } else {
        Mode::Numeric
    };
    let default = |text: &str| -> Param {
        match mode {
            Mode::Symbolic => Param::Symbolic,
            Mode::Numeric => Param::Value(Scalar::parse_decimal(text).unwrap()),
        }
    };

    let cfg = RunConfig {
        command,
        mode,
        model,
        dim: args.dim.or(file.dim).unwrap_or(3),
        split: args.split.or(file.split).unwrap_or(1),
        c0: resolve_param("c0", &args.c0, &file.c0, default("1"))?,
        c1: resolve_param("c1", &args.c1, &file.c1, default("0"))?,
        c2: resolve_param("c2", &args.c2, &file.c2, default("0"))?,
        omega: resolve_param("omega", &args.omega, &file.omega, default("1"))?,
        hbar: resolve_param("hbar", &args.hbar, &file.hbar, default("1"))?,
        p_max: args.p_max.or(file.p_max).unwrap_or(2),
        levels: args.levels.or(file.levels).unwrap_or(3),
        grid: args.grid.or(file.grid).unwrap_or(4096),
        rmax: args.rmax.or(file.rmax),
        tol: args.tol.or(file.tol).unwrap_or(1e-6),
        out: args.out.clone().or(file.out),
        format,
    };

    check_mode(&cfg)?;
    if cfg.levels == 0 {
        return Err(CliError::Config("--levels must be at least 1".into()));
    }
    if let Some(r) = cfg.rmax {
        if !(r > 0.0) {
            return Err(CliError::Config("--rmax must be positive".into()));
        }
    }
    if !(cfg.tol > 0.0) {
        return Err(CliError::Config("--tol must be positive".into()));
    }
    Ok(cfg)
}
