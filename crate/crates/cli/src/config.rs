//! Experiment configuration: a JSON document describing the map and the run.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use parashift_core::extrapolate::DEFAULT_TOLERANCE;
use parashift_core::orbit::{DEFAULT_HORIZON, DEFAULT_MIN_ORBIT};
use parashift_core::{Atom, Complex64, HalfPlanePoint, HistogramPiece, ParabolicMap, PowerTail, RealMeasure};
use serde::Deserialize;

pub const DEFAULT_STRIDE: usize = 100;
pub const DEFAULT_SEED: u64 = 0;
pub const DEFAULT_SUITE_SIZE: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::Subcommand)]
#[serde(rename_all = "lowercase")]
pub enum Experiment {
    /// Classify finite vs infinite shift from the moments of the measure
    Classify,
    /// Iterate from z0, write orbit.csv and the limit diagnostics
    Orbit,
    /// Disk-side rate n|g^n - tau| against 2/|drift|, written to rate.csv
    Rate,
    /// Extrapolated Re(z_n)/n against the analytic drift
    Drift,
    /// Randomized classifier vs orbit cross-validation, written to suite.csv
    Suite,
}

impl Experiment {
    fn needs_map(self) -> bool {
        !matches!(self, Experiment::Suite)
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Experiment::Classify => "classify",
            Experiment::Orbit => "orbit",
            Experiment::Rate => "rate",
            Experiment::Drift => "drift",
            Experiment::Suite => "suite",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Convergence threshold for extrapolated limits.
    pub limit: f64,
    /// Largest admissible tail of the oracle series.
    pub oracle: f64,
    /// Relative tolerance for the rate comparison.
    pub rate: f64,
    /// Relative tolerance for the drift comparison.
    pub drift: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            limit: DEFAULT_TOLERANCE,
            oracle: 0.05,
            rate: 0.02,
            drift: 0.01,
        }
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct MeasureSpec {
    atoms: Vec<Atom>,
    pieces: Vec<HistogramPiece>,
    tails: Vec<PowerTail>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct RawConfig {
    beta: Option<f64>,
    measure: Option<MeasureSpec>,
    experiment: Option<Experiment>,
    z0: Option<[f64; 2]>,
    z: Option<[f64; 2]>,
    tau: Option<[f64; 2]>,
    horizon: Option<usize>,
    stride: Option<usize>,
    min_orbit: Option<usize>,
    tolerances: Tolerances,
    output: Option<PathBuf>,
    seed: Option<u64>,
    suite_size: Option<usize>,
}

/// A validated experiment.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    /// Absent only when the document names no map (allowed for `suite`).
    pub map: Option<ParabolicMap>,
    pub experiment: Option<Experiment>,
    /// Start of the half-plane orbit.
    pub z0: HalfPlanePoint,
    /// Disk base point for `rate`.
    pub z: Complex64,
    /// Denjoy–Wolff point on the unit circle.
    pub tau: Complex64,
    pub horizon: usize,
    pub stride: usize,
    pub min_orbit: usize,
    pub tolerances: Tolerances,
    pub output: Option<PathBuf>,
    pub seed: u64,
    pub suite_size: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            map: None,
            experiment: None,
            z0: HalfPlanePoint::i(),
            z: Complex64::new(0.0, 0.0),
            tau: Complex64::new(1.0, 0.0),
            horizon: DEFAULT_HORIZON,
            stride: DEFAULT_STRIDE,
            min_orbit: DEFAULT_MIN_ORBIT,
            tolerances: Tolerances::default(),
            output: None,
            seed: DEFAULT_SEED,
            suite_size: DEFAULT_SUITE_SIZE,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ConfigError {
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    Validation(String),
}

impl ConfigError {
    pub fn name(&self) -> &'static str {
        match self {
            ConfigError::Parse { .. } => "ParseError",
            ConfigError::Validation(_) => "ValidationError",
        }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigError::Parse { line, column, message } => write!(f, "line {line}, column {column}: {message}"),
            ConfigError::Validation(m) => f.write_str(m),
        }
    }
}

impl std::error::Error for ConfigError {}

fn invalid(message: impl Into<String>) -> ConfigError {
    ConfigError::Validation(message.into())
}

pub fn parse_config(text: &str) -> Result<ExperimentConfig, ConfigError> {
    let raw: RawConfig = serde_json::from_str(text).map_err(|e| ConfigError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let mut config = ExperimentConfig::default();
    if raw.beta.is_some() || raw.measure.is_some() {
        let m = raw.measure.unwrap_or_default();
        let mu = RealMeasure::new(m.atoms, m.pieces, m.tails).map_err(|e| invalid(e.to_string()))?;
        let map = ParabolicMap::new(raw.beta.unwrap_or(0.0), mu).map_err(|e| match e {
            parashift_core::Error::DegenerateMap => invalid(
                "violates \"beta and mu not simultaneously null\": beta = 0 with an empty measure is the identity",
            ),
            e => invalid(e.to_string()),
        })?;
        config.map = Some(map);
    }
    config.experiment = raw.experiment;
    if let Some([x, y]) = raw.z0 {
        config.z0 = HalfPlanePoint::new(x, y).map_err(|e| invalid(format!("z0: {e}")))?;
    }
    if let Some([re, im]) = raw.z {
        config.z = Complex64::new(re, im);
    }
    if let Some([re, im]) = raw.tau {
        config.tau = Complex64::new(re, im);
    }
    config.horizon = raw.horizon.unwrap_or(config.horizon);
    config.stride = raw.stride.unwrap_or(config.stride);
    config.min_orbit = raw.min_orbit.unwrap_or(config.min_orbit);
    config.tolerances = raw.tolerances;
    config.output = raw.output;
    config.seed = raw.seed.unwrap_or(config.seed);
    config.suite_size = raw.suite_size.unwrap_or(config.suite_size);
    config.validate()?;
    Ok(config)
}

impl ExperimentConfig {
    /// Checks the invariants that do not depend on the experiment kind.
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.horizon < 1 {
            return Err(invalid("horizon must be at least 1"));
        }
        if self.stride < 1 {
            return Err(invalid("stride must be at least 1"));
        }
        if !(self.z.norm() < 1.0) {
            return Err(invalid(format!("z = {} must lie in the open unit disk", self.z)));
        }
        if !((self.tau.norm() - 1.0).abs() <= 1e-12) {
            return Err(invalid(format!("tau = {} must have modulus 1", self.tau)));
        }
        let t = &self.tolerances;
        for (name, v) in [
            ("limit", t.limit),
            ("oracle", t.oracle),
            ("rate", t.rate),
            ("drift", t.drift),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(invalid(format!("tolerance {name} must be positive")));
            }
        }
        Ok(())
    }

    pub fn map_for(&self, experiment: Experiment) -> Result<&ParabolicMap, ConfigError> {
        match &self.map {
            Some(m) => Ok(m),
            None if experiment.needs_map() => Err(invalid(format!("{experiment} needs a map: give beta and measure"))),
            None => Err(invalid("no map configured")),
        }
    }
}

/// Parses `"a,b"` into two reals.
pub fn parse_pair(text: &str) -> Result<[f64; 2], ConfigError> {
    let bad = || invalid(format!("expected \"a,b\", got {text:?}"));
    let (a, b) = text.split_once(',').ok_or_else(bad)?;
    let a = f64::from_str(a.trim()).map_err(|_| bad())?;
    let b = f64::from_str(b.trim()).map_err(|_| bad())?;
    Ok([a, b])
}
