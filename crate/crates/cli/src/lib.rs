//! Command-line front end: flag and spec parsing, sweeps, CSV, SVG and manifests.

pub mod args;
pub mod commands;
pub mod csvio;
pub mod error;
pub mod spec;
pub mod svg;

pub use args::Cli;
pub use error::CliError;

/// Worker count requested through `ASAF_WORKERS`, if any.
pub fn workers_from_env() -> Result<Option<usize>, CliError> {
    match std::env::var("ASAF_WORKERS") {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(CliError::usage(format!("ASAF_WORKERS must be a positive integer, got `{v}`"))),
        },
        Err(_) => Ok(None),
    }
}

/// Runs one parsed command, inside a capped thread pool when requested.
pub fn run(cli: Cli) -> Result<(), CliError> {
    match workers_from_env()? {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| CliError::usage(format!("thread pool: {e}")))?;
            pool.install(|| commands::dispatch(cli.command))
        }
        None => commands::dispatch(cli.command),
    }
}
