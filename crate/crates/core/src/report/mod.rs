//! Named verification suites and their reports.

mod suites;

use std::fmt::Write as _;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const SUITE_NAMES: [&str; 10] = [
    "clifford",
    "connection",
    "lemma-cross",
    "vphi-triple",
    "theorem1",
    "theorem2",
    "surface",
    "clifford-torus",
    "rescaling",
    "convergence",
];

/// One verified quantity.
///
/// Lower-bound checks ("at least `t`") are stored as
/// `residual = max(0, t - measured)` with tolerance 0 and the measured value
/// kept alongside.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub measured: Option<f64>,
}

impl Check {
    pub fn at_most(name: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        // NaN or infinite residuals are failures; keep the JSON finite.
        let (residual, ok) = if residual.is_finite() { (residual, true) } else { (f64::MAX, false) };
        Self {
            name: name.into(),
            pass: ok && residual <= tolerance,
            residual,
            tolerance,
            measured: None,
        }
    }

    pub fn at_least(name: impl Into<String>, measured: f64, threshold: f64) -> Self {
        let measured_ok = measured.is_finite();
        let deficit = if measured_ok { (threshold - measured).max(0.0) } else { f64::MAX };
        Self {
            name: name.into(),
            residual: deficit,
            tolerance: 0.0,
            pass: measured_ok && deficit == 0.0,
            measured: Some(if measured_ok { measured } else { f64::MAX }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteResult {
    pub suite: String,
    pub checks: Vec<Check>,
    /// Seconds.
    pub wall_time: f64,
    pub fd_steps: Vec<f64>,
    pub seed: u64,
    pub pass: bool,
}

impl SuiteResult {
    /// The same result with the wall time zeroed; two runs with equal
    /// configs agree bitwise on this.
    pub fn without_timing(&self) -> Self {
        Self { wall_time: 0.0, ..self.clone() }
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

/// Step sizes: a single value or a list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Steps {
    One(f64),
    Many(Vec<f64>),
}

impl Steps {
    pub fn as_vec(&self) -> Vec<f64> {
        match self {
            Steps::One(h) => vec![*h],
            Steps::Many(v) => v.clone(),
        }
    }
}

/// Suite parameters; every field is optional and has a per-suite default.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h: Option<Steps>,
}

impl SuiteConfig {
    pub fn from_json(config: &serde_json::Value) -> Result<Self> {
        if config.is_null() {
            return Ok(Self::default());
        }
        let cfg: Self = serde_json::from_value(config.clone()).map_err(|e| Error::Config(e.to_string()))?;
        if cfg.samples == Some(0) {
            return Err(Error::EmptySamples);
        }
        if let Some(m) = cfg.m {
            if !(1..=8).contains(&m) {
                return Err(Error::Config(format!("m must lie in 1..=8, got {m}")));
            }
        }
        if let Some(h) = &cfg.h {
            let v = h.as_vec();
            if v.is_empty() || v.iter().any(|s| !(s.is_finite() && *s > 0.0)) {
                return Err(Error::Config("h must be positive finite step(s)".into()));
            }
        }
        Ok(cfg)
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(0)
    }
}

/// Run a named suite. The result depends only on `config`, apart from the
/// wall time.
pub fn run_suite(name: &str, config: &serde_json::Value) -> Result<SuiteResult> {
    let cfg = SuiteConfig::from_json(config)?;
    let start = Instant::now();
    let (checks, fd_steps) = match name {
        "clifford" => suites::clifford(&cfg)?,
        "connection" => suites::connection(&cfg)?,
        "lemma-cross" => suites::lemma_cross(&cfg)?,
        "vphi-triple" => suites::vphi_triple(&cfg)?,
        "theorem1" => suites::theorem1(&cfg)?,
        "theorem2" => suites::theorem2(&cfg)?,
        "surface" => suites::surface(&cfg)?,
        "clifford-torus" => suites::clifford_torus(&cfg)?,
        "rescaling" => suites::rescaling(&cfg)?,
        "convergence" => suites::convergence(&cfg)?,
        other => return Err(Error::UnknownSuite(other.to_string())),
    };
    let pass = !checks.is_empty() && checks.iter().all(|c| c.pass);
    Ok(SuiteResult {
        suite: name.to_string(),
        checks,
        wall_time: start.elapsed().as_secs_f64(),
        fd_steps,
        seed: cfg.seed(),
        pass,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    Json,
    Table,
    Csv,
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Self::Json),
            "table" => Ok(Self::Table),
            "csv" => Ok(Self::Csv),
            other => Err(Error::Config(format!("unknown format `{other}` (json, table, csv)"))),
        }
    }
}

pub fn emit_report(result: &SuiteResult, format: ReportFormat) -> String {
    match format {
        ReportFormat::Json => {
            let mut s = serde_json::to_string_pretty(result).expect("finite report serializes");
            s.push('\n');
            s
        }
        ReportFormat::Table => table(result),
        ReportFormat::Csv => csv_rows(result),
    }
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

fn table(r: &SuiteResult) -> String {
    let width = r.checks.iter().map(|c| c.name.chars().count()).max().unwrap_or(5).max(5);
    let mut out = String::new();
    let _ = writeln!(out, "suite: {}  (seed {})", r.suite, r.seed);
    let _ = writeln!(out, "{:<width$}  {:>12}  {:>12}  {:>12}  result", "check", "residual", "tolerance", "measured");
    let _ = writeln!(out, "{}", "-".repeat(width + 50));
    for c in &r.checks {
        let measured = c.measured.map_or_else(|| "-".to_string(), |v| format!("{v:.4e}"));
        let _ = writeln!(
            out,
            "{:<width$}  {:>12.4e}  {:>12.4e}  {:>12}  {}",
            c.name,
            c.residual,
            c.tolerance,
            measured,
            verdict(c.pass)
        );
    }
    let passed = r.checks.iter().filter(|c| c.pass).count();
    let _ = writeln!(
        out,
        "{}: {} ({}/{} checks passed) in {:.3} s",
        r.suite,
        verdict(r.pass),
        passed,
        r.checks.len(),
        r.wall_time
    );
    out
}

fn csv_rows(r: &SuiteResult) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["suite", "name", "residual", "tolerance", "measured", "pass"])
        .expect("in-memory writer");
    for c in &r.checks {
        let measured = c.measured.map(|v| v.to_string()).unwrap_or_default();
        w.write_record([
            r.suite.as_str(),
            c.name.as_str(),
            &c.residual.to_string(),
            &c.tolerance.to_string(),
            &measured,
            &c.pass.to_string(),
        ])
        .expect("in-memory writer");
    }
    String::from_utf8(w.into_inner().expect("in-memory writer")).expect("csv is utf-8")
}
