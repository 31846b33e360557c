use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use bosonic_sw_cli::{parse_config, run, Emit};
use clap::Parser;

/// Effective Hamiltonians of weakly nonlinear oscillators and their
/// numerical checks.
#[derive(Parser, Debug)]
#[command(name = "bosonic-sw", version)]
struct Args {
    /// Run configuration (`key = value` lines).
    #[arg(long)]
    config: PathBuf,
    /// Directory for the output artifacts.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Output form; `symbolic` and `coefficients` apply to effective-hamiltonian.
    #[arg(long, value_enum, default_value_t = Emit::Csv)]
    emit: Emit,
    /// Worker threads for parameter sweeps.
    #[arg(long, env = "BOSONIC_SW_THREADS")]
    threads: Option<usize>,
    /// Reserved; every workflow is deterministic. Recorded in the headers.
    #[arg(long)]
    seed: Option<u64>,
}

fn main() -> ExitCode {
    match real_main() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn real_main() -> Result<()> {
    let args = Args::parse();
    if let Some(n) = args.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("configuring the thread pool")?;
    }
    let text = fs::read_to_string(&args.config).with_context(|| format!("reading {}", args.config.display()))?;
    let config = parse_config(&text).with_context(|| format!("in {}", args.config.display()))?;
    let report = run(&config, &args.out, args.emit, args.seed)?;
    println!("{}", report.summary.trim_end());
    for f in &report.files {
        println!("wrote {}", f.display());
    }
    Ok(())
}
