use std::process::ExitCode;

use clap::Parser;
use parashift_cli::{error_name, load, run, ConfigError, Experiment, Overrides};

/// Parabolic self-maps of the upper half-plane: classification, orbits and rates.
#[derive(Parser)]
#[command(name = "parashift", version)]
struct Cli {
    /// Falls back to the `experiment` field of the configuration
    #[command(subcommand)]
    experiment: Option<Experiment>,
    #[command(flatten)]
    overrides: Overrides,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = load(&cli.overrides).and_then(|config| {
        let experiment = cli
            .experiment
            .or(config.experiment)
            .ok_or_else(|| ConfigError::Validation("no experiment: give a subcommand or set `experiment`".into()))?;
        run(&config, experiment, &mut std::io::stdout().lock())
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}: {e:#}", error_name(&e));
            ExitCode::FAILURE
        }
    }
}
