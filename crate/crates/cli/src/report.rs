//! Report assembly and serialization. Reports are byte-identical across
//! repeated runs with the same configuration: nothing time- or
//! machine-dependent goes into them, numbers are rendered as fixed-width
//! decimal strings, and check rows are sorted by name before emission.

use std::fs;
use std::io::{self, Write};

use quadsym_core::value::Scalar;
use serde::Serialize;

use crate::config::{RunConfig, Mode};
use crate::{Format, ModelKind};

/// A numeric field: 15-significant-digit decimal, plus the exact rational
/// as a string whenever the value is exact.
#[derive(Clone, Debug, Serialize)]
pub struct Num {
    pub decimal: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<String>,
}

impl Num {
    pub fn from_scalar(s: &Scalar) -> Num {
        Num {
            decimal: s.to_sig_string(15),
            exact: s.as_exact_str(),
        }
    }

    pub fn from_f64(x: f64) -> Num {
        Num {
            decimal: sig15(x),
            exact: None,
        }
    }
}

/// Deterministic 15-significant-digit rendering of a float.
pub fn sig15(x: f64) -> String {
    if x == 0.0 {
        "0".into()
    } else if x.is_finite() {
        format!("{x:.14e}")
    } else {
        format!("{x}")
    }
}

#[derive(Debug, Serialize)]
pub struct ConfigEcho {
    pub model: &'static str,
    pub dim: u32,
    pub split: Option<u32>,
    pub c0: String,
    pub c1: String,
    pub c2: String,
    pub omega: String,
    pub hbar: String,
    pub p_max: u32,
    pub levels: u32,
    pub grid: usize,
    pub rmax: Option<String>,
    pub tol: String,
    pub format: &'static str,
}

#[derive(Debug, Serialize)]
pub struct CheckRow {
    pub name: String,
    pub status: &'static str,
    pub residual_terms: usize,
    pub detail: String,
}

#[derive(Debug, Serialize)]
pub struct SpectrumRow {
    pub quantum_numbers: String,
    pub e_physical: Num,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub e_algebraic: Option<Num>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub branch: Option<String>,
    pub matched: bool,
    pub positive: bool,
}

#[derive(Debug, Serialize)]
pub struct OracleRow {
    pub level: u32,
    pub scheme: String,
    pub e_formula: Num,
    pub e_oracle: Num,
    pub rel_err: String,
    pub ratio: String,
    pub converged: bool,
}

#[derive(Debug, Serialize)]
pub struct ScanRow {
    pub p: u32,
    pub energy: Num,
    pub u: Num,
    pub zero_root: usize,
    pub top_root: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub signs: Option<String>,
    pub integer_positive: bool,
    pub scan_positive: bool,
}

#[derive(Debug, Serialize)]
pub struct SurvivorRow {
    pub p: u32,
    pub survivors: usize,
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub config: ConfigEcho,
    pub checks: Vec<CheckRow>,
    pub spectrum: Vec<SpectrumRow>,
    pub oracle: Vec<OracleRow>,
    pub scan: Vec<ScanRow>,
    pub survivors: Vec<SurvivorRow>,
}

impl Report {
    pub fn new(cfg: &RunConfig) -> Report {
        Report {
            tool: "quadsym",
            version: env!("CARGO_PKG_VERSION"),
            command: cfg.command,
            config: echo(cfg),
            checks: Vec::new(),
            spectrum: Vec::new(),
            oracle: Vec::new(),
            scan: Vec::new(),
            survivors: Vec::new(),
        }
    }
}

fn echo(cfg: &RunConfig) -> ConfigEcho {
    ConfigEcho {
        model: match cfg.model {
            ModelKind::Kc => "kc",
            ModelKind::Dso => "dso",
        },
        dim: cfg.dim,
        split: match cfg.model {
            ModelKind::Dso => Some(cfg.split),
            ModelKind::Kc => None,
        },
        c0: cfg.c0.echo(),
        c1: cfg.c1.echo(),
        c2: cfg.c2.echo(),
        omega: cfg.omega.echo(),
        hbar: cfg.hbar.echo(),
        p_max: cfg.p_max,
        levels: cfg.levels,
        grid: cfg.grid,
        rmax: cfg.rmax.map(sig15),
        tol: sig15(cfg.tol),
        format: match cfg.format {
            Format::Json => "json",
            Format::Csv => "csv",
        },
    }
}

/// The symbolic/numeric mode never reaches the report directly, but the
/// echo keeps enough to reconstruct the run; assert the invariant holds.
pub fn debug_assert_mode_consistent(cfg: &RunConfig) {
    debug_assert!(
        (cfg.mode == Mode::Symbolic) == (cfg.command == "verify"),
        "verify is the only symbolic command"
    );
}

fn csv_bytes(report: &Report) -> Result<Vec<u8>, io::Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    match report.command {
        "verify" => {
            w.write_record(["name", "status", "residual_terms", "detail"])?;
            for c in &report.checks {
                w.write_record([
                    c.name.as_str(),
                    c.status,
                    &c.residual_terms.to_string(),
                    c.detail.as_str(),
                ])?;
            }
        }
        "spectrum" => {
            w.write_record([
                "quantum_numbers",
                "e_physical",
                "e_physical_exact",
                "e_algebraic",
                "e_algebraic_exact",
                "branch",
                "matched",
                "positive",
            ])?;
            for r in &report.spectrum {
                w.write_record([
                    r.quantum_numbers.as_str(),
                    &r.e_physical.decimal,
                    r.e_physical.exact.as_deref().unwrap_or(""),
                    r.e_algebraic.as_ref().map_or("", |n| n.decimal.as_str()),
                    r.e_algebraic
                        .as_ref()
                        .and_then(|n| n.exact.as_deref())
                        .unwrap_or(""),
                    r.branch.as_deref().unwrap_or(""),
                    if r.matched { "true" } else { "false" },
                    if r.positive { "true" } else { "false" },
                ])?;
            }
        }
        "oracle" => {
            w.write_record([
                "level", "scheme", "e_formula", "e_oracle", "rel_err", "ratio", "converged",
            ])?;
            for r in &report.oracle {
                w.write_record([
                    r.level.to_string(),
                    r.scheme.clone(),
                    r.e_formula.decimal.clone(),
                    r.e_oracle.decimal.clone(),
                    r.rel_err.clone(),
                    r.ratio.clone(),
                    r.converged.to_string(),
                ])?;
            }
        }
        _ => {
            w.write_record([
                "p",
                "energy",
                "energy_exact",
                "u",
                "u_exact",
                "zero_root",
                "top_root",
                "signs",
                "integer_positive",
                "scan_positive",
                "survivors_at_p",
            ])?;
            let survivors_at = |p: u32| {
                report
                    .survivors
                    .iter()
                    .find(|s| s.p == p)
                    .map_or(0, |s| s.survivors)
            };
            for r in &report.scan {
                w.write_record([
                    r.p.to_string(),
                    r.energy.decimal.clone(),
                    r.energy.exact.clone().unwrap_or_default(),
                    r.u.decimal.clone(),
                    r.u.exact.clone().unwrap_or_default(),
                    r.zero_root.to_string(),
                    r.top_root.to_string(),
                    r.signs.clone().unwrap_or_default(),
                    r.integer_positive.to_string(),
                    r.scan_positive.to_string(),
                    survivors_at(r.p).to_string(),
                ])?;
            }
        }
    }
    w.into_inner().map_err(|e| e.into_error())
}

/// Serialize the report and write it to `--out` or stdout.
pub fn emit(report: &Report, cfg: &RunConfig) -> Result<(), io::Error> {
    debug_assert_mode_consistent(cfg);
    let bytes = match cfg.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report)?;
            s.push('\n');
            s.into_bytes()
        }
        Format::Csv => csv_bytes(report)?,
    };
    match &cfg.out {
        Some(path) => fs::write(path, bytes),
        None => io::stdout().write_all(&bytes),
    }
}
