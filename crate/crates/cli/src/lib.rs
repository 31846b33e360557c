//! Command-line front end: reads a run configuration, runs one workflow and
//! writes CSV and text artifacts.

pub mod config;
pub mod output;
pub mod workflows;

use std::path::Path;
use std::path::PathBuf;

use anyhow::Result;
use clap::ValueEnum;

pub use config::{parse_config, ConfigError, RunConfig, Workflow};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Emit {
    Symbolic,
    Coefficients,
    Csv,
}

impl Emit {
    pub fn name(self) -> &'static str {
        match self {
            Emit::Symbolic => "symbolic",
            Emit::Coefficients => "coefficients",
            Emit::Csv => "csv",
        }
    }
}

/// Result of [`run`]: the terminal summary and the files written.
pub struct RunReport {
    pub summary: String,
    pub files: Vec<PathBuf>,
}

/// Runs `config`, writing artifacts under `out`.
pub fn run(config: &RunConfig, out: &Path, emit: Emit, seed: Option<u64>) -> Result<RunReport> {
    let extra = vec![
        format!("emit = {}", emit.name()),
        format!("seed = {}", seed.map_or_else(|| "none".to_string(), |s| s.to_string())),
    ];
    let mut artifacts = output::Artifacts::new(out, config, &extra)?;
    let summary = workflows::dispatch(config, emit, &mut artifacts)?;
    Ok(RunReport {
        summary,
        files: artifacts.written().to_vec(),
    })
}
