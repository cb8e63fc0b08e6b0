//! Command line front end: configuration, experiment orchestration and report emission.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod report;

use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::Context;
use parashift_core::orbit::{drift_limit_with, orbit_rows, pommerenke_quantities_with, STEP_ZERO_FACTOR};
use parashift_core::{classify_shift, iterate, oracle_verdict, run_suite, AtomMapSampler, DiskSetting, OracleOptions};

pub use config::{parse_config, ConfigError, Experiment, ExperimentConfig};

pub const DEFAULT_OUTPUT: &str = "parashift-out";

/// Command line overrides of the configuration file.
#[derive(Debug, Clone, Default, clap::Args)]
pub struct Overrides {
    /// JSON experiment configuration
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Directory for CSV output
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Horizon (number of steps)
    #[arg(long, global = true, value_name = "INT")]
    pub n: Option<usize>,
    /// Start of the half-plane orbit
    #[arg(long, global = true, value_name = "x,y", allow_hyphen_values = true)]
    pub z0: Option<String>,
    /// Denjoy-Wolff point on the unit circle
    #[arg(long, global = true, value_name = "re,im", allow_hyphen_values = true)]
    pub tau: Option<String>,
    /// Base seed for suite mode
    #[arg(long, global = true, value_name = "INT")]
    pub seed: Option<u64>,
    /// Decimation of CSV rows
    #[arg(long, global = true, value_name = "INT")]
    pub stride: Option<usize>,
}

/// Loads the configuration file (if any) and applies the overrides.
pub fn load(overrides: &Overrides) -> anyhow::Result<ExperimentConfig> {
    let mut config = match &overrides.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            parse_config(&text)?
        }
        None => ExperimentConfig::default(),
    };
    if let Some(n) = overrides.n {
        config.horizon = n;
    }
    if let Some(s) = &overrides.z0 {
        let [x, y] = config::parse_pair(s)?;
        config.z0 =
            parashift_core::HalfPlanePoint::new(x, y).map_err(|e| ConfigError::Validation(format!("z0: {e}")))?;
    }
    if let Some(s) = &overrides.tau {
        let [re, im] = config::parse_pair(s)?;
        config.tau = parashift_core::Complex64::new(re, im);
    }
    if let Some(seed) = overrides.seed {
        config.seed = seed;
    }
    if let Some(stride) = overrides.stride {
        config.stride = stride;
    }
    if let Some(out) = &overrides.out {
        config.output = Some(out.clone());
    }
    config.validate()?;
    Ok(config)
}

fn output_dir(config: &ExperimentConfig) -> anyhow::Result<PathBuf> {
    let dir = config.output.clone().unwrap_or_else(|| PathBuf::from(DEFAULT_OUTPUT));
    std::fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
    Ok(dir)
}

fn relative_error(estimate: f64, exact: f64) -> f64 {
    (estimate - exact).abs() / exact.abs()
}

fn wrote(out: &mut dyn Write, path: &Path) -> std::io::Result<()> {
    writeln!(out, "wrote {}", path.display())
}

/// Runs one experiment, printing the summary to `out` and writing CSV
/// files to the output directory.
pub fn run(config: &ExperimentConfig, experiment: Experiment, out: &mut dyn Write) -> anyhow::Result<()> {
    match experiment {
        Experiment::Classify => classify(config, out),
        Experiment::Orbit => orbit(config, out),
        Experiment::Rate => rate(config, out),
        Experiment::Drift => drift(config, out),
        Experiment::Suite => suite(config, out),
    }
}

fn oracle_options(config: &ExperimentConfig) -> OracleOptions {
    OracleOptions {
        n_max: config.horizon,
        tolerance: config.tolerances.oracle,
        ..OracleOptions::default()
    }
}

fn classify(config: &ExperimentConfig, out: &mut dyn Write) -> anyhow::Result<()> {
    let map = config.map_for(Experiment::Classify)?;
    let verdict = classify_shift(map);
    report::write_verdict_text(out, map.beta(), &verdict)?;
    let path = output_dir(config)?.join("verdict.csv");
    report::write_verdict_csv(&path, &verdict)?;
    wrote(out, &path)?;
    Ok(())
}

fn orbit(config: &ExperimentConfig, out: &mut dyn Write) -> anyhow::Result<()> {
    let map = config.map_for(Experiment::Orbit)?;
    let orbit = iterate(map, config.z0, config.horizon)?;
    let path = output_dir(config)?.join("orbit.csv");
    report::write_orbit_csv(&path, &orbit_rows(&orbit, config.stride))?;

    let last = orbit.last();
    writeln!(out, "steps {}", orbit.steps())?;
    writeln!(out, "z_N {} + {}i", last.x, last.y)?;
    writeln!(out, "classifier {}", classify_shift(map).kind)?;
    writeln!(
        out,
        "oracle {}",
        report::oracle_line(&oracle_verdict(&orbit, &oracle_options(config)))
    )?;
    let d = pommerenke_quantities_with(&orbit, config.min_orbit, config.tolerances.limit)?;
    writeln!(out, "b {}", report::estimate(&d.b_hat))?;
    writeln!(out, "Y {}", report::estimate(&d.y_hat))?;
    writeln!(out, "Delta {}", report::estimate(&d.delta_hat))?;
    writeln!(out, "step {}", report::estimate(&d.step_hat))?;
    let step = if d.positive_step() { "positive" } else { "zero" };
    writeln!(out, "step limit {step} (zero below {STEP_ZERO_FACTOR} x indicator)")?;
    if let Some(sum) = d.series_partial_sums.last() {
        writeln!(out, "series partial sum {sum}")?;
    }
    let (gap, allowed) = d.delta_consistency(5.0);
    writeln!(out, "|Delta - b Y| {gap:.3e} (allowance {allowed:.3e})")?;
    wrote(out, &path)?;
    Ok(())
}

fn rate(config: &ExperimentConfig, out: &mut dyn Write) -> anyhow::Result<()> {
    let map = config.map_for(Experiment::Rate)?;
    let setting = DiskSetting::new(config.tau, map.clone())?;
    let rows = setting.rate_rows(config.z, config.horizon, config.stride)?;
    let path = output_dir(config)?.join("rate.csv");
    report::write_rate_csv(&path, &rows)?;
    wrote(out, &path)?;

    let last = rows.last().context("empty rate table")?;
    writeln!(out, "n {}", last.n)?;
    writeln!(out, "n |g^n - tau| {}", last.n_times_gap)?;
    let est = setting.verify_rate(config.z, config.horizon)?;
    writeln!(out, "extrapolated {}", report::estimate(&est))?;
    let c = setting.rate_constant()?;
    let rel = relative_error(est.value, c);
    writeln!(out, "rate constant {c}")?;
    writeln!(
        out,
        "relative error {rel:.3e} ({} tolerance {})",
        if rel <= config.tolerances.rate {
            "within"
        } else {
            "outside"
        },
        config.tolerances.rate
    )?;
    Ok(())
}

fn drift(config: &ExperimentConfig, out: &mut dyn Write) -> anyhow::Result<()> {
    let map = config.map_for(Experiment::Drift)?;
    let orbit = iterate(map, config.z0, config.horizon)?;
    let limit = drift_limit_with(&orbit, config.min_orbit, config.tolerances.limit)?;
    writeln!(out, "drift estimate {}", report::estimate(&limit.re))?;
    writeln!(out, "Im z_N / N {:.3e}", limit.im_residual)?;
    let verdict = classify_shift(map);
    writeln!(out, "analytic drift {}", report::drift_literal(&verdict.report))?;
    if let Some(exact) = verdict.report.drift {
        let rel = relative_error(limit.re.value, exact);
        writeln!(
            out,
            "relative error {rel:.3e} ({} tolerance {})",
            if rel <= config.tolerances.drift {
                "within"
            } else {
                "outside"
            },
            config.tolerances.drift
        )?;
    }
    Ok(())
}

fn suite(config: &ExperimentConfig, out: &mut dyn Write) -> anyhow::Result<()> {
    let seeds: Vec<u64> = (config.seed..).take(config.suite_size).collect();
    let rows = run_suite(&seeds, &AtomMapSampler::default(), config.z0, &oracle_options(config))?;
    let path = output_dir(config)?.join("suite.csv");
    report::write_suite_csv(&path, &rows)?;
    report::write_suite_table(out, &rows)?;
    wrote(out, &path)?;
    Ok(())
}

/// Name of the error variant reported on standard error.
pub fn error_name(e: &anyhow::Error) -> &'static str {
    if let Some(e) = e.downcast_ref::<parashift_core::Error>() {
        e.name()
    } else if let Some(e) = e.downcast_ref::<ConfigError>() {
        e.name()
    } else if e.downcast_ref::<csv::Error>().is_some() {
        "CsvError"
    } else if e.downcast_ref::<std::io::Error>().is_some() {
        "IoError"
    } else {
        "Error"
    }
}
