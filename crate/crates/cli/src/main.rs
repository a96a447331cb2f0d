//! `pt-horizon` command line. Exit codes: 0 success or inside, 1 outside,
//! boundary or failed verification, 2 on any error.

mod args;
mod commands;
mod render;

use std::process::ExitCode;

use anyhow::Context;
use clap::Parser;

use crate::args::Cli;
use crate::commands::Outcome;

/// Caps the worker pool; results do not depend on it.
const THREADS_ENV: &str = "PT_HORIZON_THREADS";

fn configure_threads() -> anyhow::Result<()> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .with_context(|| format!("{THREADS_ENV} must be a positive integer, got {raw:?}"))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure_threads().and_then(|()| commands::run(cli.command));
    match result {
        Ok(Outcome::Success) => ExitCode::SUCCESS,
        Ok(Outcome::Negative) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
