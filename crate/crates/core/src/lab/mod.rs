//! Reproducible verification suites over the finite models.
//!
//! A run is described by an [`ExperimentConfig`] (TOML), executes one or more
//! suites and produces a [`RunReport`] with one record per check. Reports are
//! deterministic given the config: the same config yields byte-identical JSON.

mod suites;

use std::io::Write;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{LabError, Result};

pub use suites::default_lattice_ratios;

pub const SUITES: [&str; 5] = ["axioms", "coupling", "torus", "symmetric", "regular"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

impl std::str::FromStr for Format {
    type Err = LabError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(LabError::Config(format!("unknown format `{other}` (expected json or csv)"))),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    /// Span distances, reciprocity and witness spread.
    pub float: f64,
    /// Crossed-product trace, traciality and positivity.
    pub trace: f64,
    /// Clock/shift commutation residual.
    pub clock_shift: f64,
    /// Monte Carlo acceptance band in standard errors.
    pub mc_sigmas: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { float: 1e-8, trace: 1e-12, clock_shift: 1e-12, mc_sigmas: 3.0 }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CouplingSuite {
    /// Product models `Z_m x Z_n`.
    pub models: Vec<[usize; 2]>,
    /// System description files checked alongside the product models.
    pub systems: Vec<String>,
}

impl Default for CouplingSuite {
    fn default() -> Self {
        Self { models: vec![[2, 3], [3, 4], [2, 5], [4, 4]], systems: Vec::new() }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TorusSuite {
    pub pairs: Vec<[u64; 2]>,
    /// Target ratio for a convergent sweep, as a decimal string.
    pub gamma: Option<String>,
    pub terms: usize,
    /// `lambda1 / lambda2` ratios for the lattice commutation checks.
    pub lattice_ratios: Vec<String>,
    /// Bound on `|m|, |n|, |r|` for the exhaustive lattice check.
    pub lattice_radius: i64,
    pub lattice_samples: usize,
    /// Clock/shift pairs `(N, p)`; empty means every `p` coprime to `N` for
    /// `N` in `clock_orders`.
    pub clock_shift: Vec<[usize; 2]>,
    pub clock_orders: Vec<usize>,
    pub weyl_groups: Vec<Vec<usize>>,
}

impl Default for TorusSuite {
    fn default() -> Self {
        Self {
            pairs: vec![[1, 2], [2, 3], [3, 2], [3, 5], [5, 3], [5, 8], [8, 5]],
            gamma: None,
            terms: 8,
            lattice_ratios: default_lattice_ratios(),
            lattice_radius: 3,
            lattice_samples: 10_000,
            clock_shift: Vec::new(),
            clock_orders: vec![4, 12, 64],
            weyl_groups: vec![vec![2], vec![6], vec![2, 3]],
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SymmetricSuite {
    /// Weight vectors as rational strings, e.g. `["1/2", "1/2"]`.
    pub specs: Vec<Vec<String>>,
    pub r: Vec<u32>,
    /// Window shapes `(r, N)` for the pseudogroupoid checks.
    pub windows: Vec<[usize; 2]>,
    pub trials: usize,
    /// Symmetric-group models `(N, r)` on binary windows.
    pub smoke: Vec<[usize; 2]>,
}

impl Default for SymmetricSuite {
    fn default() -> Self {
        Self {
            specs: vec![
                vec!["1/2".into(), "3/10".into(), "1/5".into()],
                vec!["1/2".into(), "1/2".into()],
            ],
            r: vec![0, 1, 2, 3],
            windows: vec![[0, 3], [1, 4]],
            trials: 1000,
            smoke: vec![[2, 1]],
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RegularSuite {
    /// Cyclic regular models `X0 = G0 = Z_n`.
    pub orders: Vec<usize>,
    /// Product models used for the crossed-product trace checks.
    pub trace_models: Vec<[usize; 2]>,
    pub trace_samples: usize,
}

impl Default for RegularSuite {
    fn default() -> Self {
        Self { orders: vec![5, 7], trace_models: vec![[2, 3], [3, 4], [2, 5], [4, 4]], trace_samples: 100 }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    pub suites: Vec<String>,
    pub seed: u64,
    pub samples: u64,
    pub max_dim: usize,
    pub format: Format,
    pub out: Option<String>,
    pub tolerances: Tolerances,
    pub coupling: CouplingSuite,
    pub torus: TorusSuite,
    pub symmetric: SymmetricSuite,
    pub regular: RegularSuite,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            suites: vec!["all".into()],
            seed: 0,
            samples: 100_000,
            max_dim: crate::algebra::DEFAULT_MAX_DIM,
            format: Format::Json,
            out: None,
            tolerances: Tolerances::default(),
            coupling: CouplingSuite::default(),
            torus: TorusSuite::default(),
            symmetric: SymmetricSuite::default(),
            regular: RegularSuite::default(),
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| LabError::Config(e.to_string()))
    }

    /// Reads a config file; relative system paths are taken from the file's directory.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| LabError::Config(format!("cannot read {}: {e}", path.display())))?;
        let mut config = Self::from_toml(&text)?;
        let base = path.parent().unwrap_or(Path::new(""));
        for system in &mut config.coupling.systems {
            if Path::new(system.as_str()).is_relative() {
                *system = base.join(&*system).display().to_string();
            }
        }
        Ok(config)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// SHA-256 of the canonical JSON form of the resolved config.
    /// SHA-256 of the canonical JSON form, ignoring the output path.
    pub fn hash(&self) -> String {
        let canonical = serde_json::to_vec(&self.recorded()).expect("config serializes");
        hex::encode(Sha256::digest(&canonical))
    }

    /// The config as recorded in report headers: the output path is dropped.
    pub fn recorded(&self) -> Self {
        Self { out: None, ..self.clone() }
    }

    /// Suite names in execution order, with `all` expanded and duplicates removed.
    pub fn resolved_suites(&self) -> Result<Vec<&'static str>> {
        if self.suites.is_empty() {
            return Err(LabError::EmptySuite);
        }
        let mut out: Vec<&'static str> = Vec::new();
        for name in &self.suites {
            let names: Vec<&'static str> = match name.as_str() {
                "all" => SUITES.to_vec(),
                other => vec![*SUITES
                    .iter()
                    .find(|s| **s == other)
                    .ok_or_else(|| LabError::UnknownSuite(other.to_string()))?],
            };
            for n in names {
                if !out.contains(&n) {
                    out.push(n);
                }
            }
        }
        Ok(out)
    }
}

/// One verified claim.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub id: String,
    pub anchor: String,
    pub expected: String,
    pub observed: String,
    /// `None` for exact comparisons.
    pub tolerance: Option<f64>,
    pub pass: bool,
    pub skip_reason: Option<String>,
}

impl Check {
    pub fn exact<T: PartialEq + std::fmt::Display>(id: impl Into<String>, anchor: &str, expected: T, observed: T) -> Self {
        Self {
            id: id.into(),
            anchor: anchor.into(),
            pass: expected == observed,
            expected: expected.to_string(),
            observed: observed.to_string(),
            tolerance: None,
            skip_reason: None,
        }
    }

    pub fn close(id: impl Into<String>, anchor: &str, expected: f64, observed: f64, tolerance: f64) -> Self {
        Self {
            id: id.into(),
            anchor: anchor.into(),
            expected: expected.to_string(),
            observed: observed.to_string(),
            tolerance: Some(tolerance),
            pass: (expected - observed).abs() <= tolerance,
            skip_reason: None,
        }
    }

    /// `observed <= bound`, recorded as expected `0` with tolerance `bound`.
    pub fn at_most(id: impl Into<String>, anchor: &str, observed: f64, bound: f64) -> Self {
        Self::close(id, anchor, 0.0, observed, bound)
    }

    pub fn skipped(id: impl Into<String>, anchor: &str, reason: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            anchor: anchor.into(),
            expected: String::new(),
            observed: String::new(),
            tolerance: None,
            pass: false,
            skip_reason: Some(reason.into()),
        }
    }

    pub fn is_skipped(&self) -> bool {
        self.skip_reason.is_some()
    }
}

/// Structured result attached to a report next to its checks.
#[derive(Debug, Clone, Serialize)]
pub struct Artifact {
    pub id: String,
    pub value: serde_json::Value,
}

#[derive(Debug, Clone, Serialize)]
pub struct Header {
    pub tool: String,
    pub version: String,
    pub seed: u64,
    pub config_hash: String,
    pub config: ExperimentConfig,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub total: usize,
    pub pass_count: usize,
    pub fail_count: usize,
    pub skip_count: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub header: Header,
    pub suites: Vec<String>,
    pub checks: Vec<Check>,
    pub artifacts: Vec<Artifact>,
    pub summary: Summary,
}

impl RunReport {
    pub fn all_pass(&self) -> bool {
        self.summary.fail_count == 0
    }

    pub fn exit_code(&self) -> i32 {
        if self.all_pass() {
            0
        } else {
            1
        }
    }

    pub fn check(&self, id: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.id == id)
    }

    pub fn artifact(&self, id: &str) -> Option<&serde_json::Value> {
        self.artifacts.iter().find(|a| a.id == id).map(|a| &a.value)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["config_hash", "seed", "id", "anchor", "expected", "observed", "tolerance", "pass", "skip_reason"])
            .expect("in-memory write");
        for c in &self.checks {
            w.write_record([
                self.header.config_hash.as_str(),
                &self.header.seed.to_string(),
                &c.id,
                &c.anchor,
                &c.expected,
                &c.observed,
                &c.tolerance.map(|t| t.to_string()).unwrap_or_default(),
                &c.pass.to_string(),
                c.skip_reason.as_deref().unwrap_or(""),
            ])
            .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("flush")).expect("csv is utf-8")
    }

    /// One line per check for terminal output.
    /// One line per failed or skipped check (every check when `verbose`), then the totals.
    pub fn human_summary(&self, verbose: bool) -> String {
        let mut out = String::new();
        for c in self.checks.iter().filter(|c| verbose || !c.pass) {
            let status = match (c.is_skipped(), c.pass) {
                (true, _) => "SKIP",
                (false, true) => "PASS",
                (false, false) => "FAIL",
            };
            let detail = match &c.skip_reason {
                Some(r) => r.clone(),
                None => format!("expected {} observed {}", c.expected, c.observed),
            };
            out.push_str(&format!("{status} {} [{}] {detail}\n", c.id, c.anchor));
        }
        let s = &self.summary;
        out.push_str(&format!(
            "{} checks: {} pass, {} fail, {} skipped\n",
            s.total, s.pass_count, s.fail_count, s.skip_count
        ));
        out
    }
}

pub(crate) struct SuiteOutput {
    pub checks: Vec<Check>,
    pub artifacts: Vec<Artifact>,
}

impl SuiteOutput {
    fn new() -> Self {
        Self { checks: Vec::new(), artifacts: Vec::new() }
    }

    fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    fn attach<T: Serialize>(&mut self, id: impl Into<String>, value: &T) {
        let value = serde_json::to_value(value).expect("artifact serializes");
        self.artifacts.push(Artifact { id: id.into(), value });
    }
}

/// Runs every suite named in `config`; suites execute in parallel and the
/// report is assembled in suite order.
pub fn run_suite(config: &ExperimentConfig) -> Result<RunReport> {
    let suites = config.resolved_suites()?;
    let outputs: Vec<Result<SuiteOutput>> = suites
        .par_iter()
        .map(|&name| match name {
            "axioms" => suites::axioms(config),
            "coupling" => suites::coupling(config),
            "torus" => suites::torus(config),
            "symmetric" => suites::symmetric(config),
            "regular" => suites::regular(config),
            _ => unreachable!("suite names are resolved"),
        })
        .collect();
    let mut checks = Vec::new();
    let mut artifacts = Vec::new();
    for out in outputs {
        let out = out?;
        checks.extend(out.checks);
        artifacts.extend(out.artifacts);
    }
    let skip_count = checks.iter().filter(|c| c.is_skipped()).count();
    let pass_count = checks.iter().filter(|c| c.pass).count();
    let summary = Summary {
        total: checks.len(),
        pass_count,
        fail_count: checks.len() - pass_count - skip_count,
        skip_count,
    };
    Ok(RunReport {
        header: Header {
            tool: env!("CARGO_PKG_NAME").into(),
            version: env!("CARGO_PKG_VERSION").into(),
            seed: config.seed,
            config_hash: config.hash(),
            config: config.recorded(),
        },
        suites: suites.iter().map(|s| s.to_string()).collect(),
        checks,
        artifacts,
        summary,
    })
}

/// Writes the report to `out`, or to standard output when `out` is `None`.
pub fn emit(report: &RunReport, format: Format, out: Option<&Path>) -> Result<()> {
    let text = match format {
        Format::Json => report.to_json(),
        Format::Csv => report.to_csv(),
    };
    match out {
        Some(path) => std::fs::write(path, text).map_err(|source| LabError::Io {
            path: path.display().to_string(),
            source,
        }),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|source| LabError::Io { path: "<stdout>".into(), source }),
    }
}
