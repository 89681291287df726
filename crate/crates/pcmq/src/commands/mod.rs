mod bessel;
mod bounds;
mod limit;
mod report;
mod simulate;
mod verify;

use std::fs;

use anyhow::Context;

pub use limit::parallel_monte_carlo;

use crate::config::{Command, RunConfig, CONFIG_FILE};
use crate::io::write_json;
use crate::outcome::{Outcome, RunError};

pub const SUMMARY_FILE: &str = "summary.json";

/// Validates `config`, runs it, and writes its artifacts, its summary and
/// the config itself under `out_dir/<subcommand>/`.
pub fn run(config: &RunConfig) -> Result<Outcome, RunError> {
    config.validate().map_err(RunError::Config)?;
    let dir = config.run_dir();
    fs::create_dir_all(&dir)
        .with_context(|| format!("creating output directory {}", dir.display()))
        .map_err(|e| RunError::Config(format!("{e:#}")))?;
    config.save(&dir.join(CONFIG_FILE))?;
    let mut outcome = match &config.command {
        Command::Verify(p) => verify::run(p, &dir)?,
        Command::Bessel(p) => bessel::run(p, &dir)?,
        Command::Limit(p) => limit::run(p, &dir)?,
        Command::Bounds(p) => bounds::run(p, &dir)?,
        Command::Simulate(p) => simulate::run(p, &dir)?,
        Command::Report(p) => report::run(p, &config.out_dir, &dir)?,
    };
    outcome.artifacts.push(dir.join(CONFIG_FILE));
    let summary = dir.join(SUMMARY_FILE);
    outcome.artifacts.push(summary.clone());
    write_json(&summary, &outcome)?;
    Ok(outcome)
}
