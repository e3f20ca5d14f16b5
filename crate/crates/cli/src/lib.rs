//! Library side of the `qsd` command: configuration, the six commands, and
//! CSV/JSON rendering. The binary is a thin wrapper around [`run`].

pub mod args;
pub mod commands;
pub mod config;
pub mod error;
pub mod table;

use std::io::Write;

pub use args::{Cli, Command, Flags, Kind};
pub use config::{QSweep, RunConfig};
pub use error::{CliError, Result};
pub use table::Table;

/// Runs one command and returns its rendered output.
pub fn execute(kind: Kind, cfg: &RunConfig) -> Result<String> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs)
        .build()
        .map_err(|e| CliError::field("jobs", e.to_string()))?;
    pool.install(|| {
        Ok(match kind {
            Kind::Helstrom => commands::cmd_helstrom(cfg)?.to_csv(),
            Kind::Locc => commands::cmd_locc(cfg)?.to_csv(),
            Kind::Gap => commands::cmd_gap(cfg)?.to_csv(),
            Kind::Fit => commands::to_json(&commands::cmd_fit(cfg)?),
            Kind::NoiseSweep => commands::cmd_noise_sweep(cfg)?.to_csv(),
            Kind::Policy => commands::to_json(&commands::cmd_policy(cfg)?),
        })
    })
}

/// Resolves the config, runs the command and writes to `out` or stdout.
pub fn run(cli: Cli) -> Result<()> {
    let (kind, flags) = cli.command.split();
    let cfg = flags.resolve()?;
    let text = if flags.dump_config { cfg.to_toml() } else { execute(kind, &cfg)? };
    match &cfg.out {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}
