use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::config::{QSweep, RunConfig};
use crate::error::{CliError, Result};

#[derive(Debug, Parser)]
#[command(
    name = "qsd",
    version,
    about = "Multi-copy qubit state discrimination: bounds, LOCC policies, circuits, noise"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Helstrom,
    Locc,
    Gap,
    Fit,
    NoiseSweep,
    Policy,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Collective (Helstrom) error probability per (v, q, M)
    Helstrom(Flags),
    /// Optimal adaptive local error probability per (v, q, M)
    Locc(Flags),
    /// LOCC minus collective error per (v, q, M)
    Gap(Flags),
    /// Fit the 3-CNOT circuit to the two-copy optimal measurement
    Fit(Flags),
    /// Error probability against noise scale
    NoiseSweep(Flags),
    /// Dump the adaptive policy tables as JSON
    Policy(Flags),
}

impl Command {
    pub fn split(self) -> (Kind, Flags) {
        match self {
            Command::Helstrom(f) => (Kind::Helstrom, f),
            Command::Locc(f) => (Kind::Locc, f),
            Command::Gap(f) => (Kind::Gap, f),
            Command::Fit(f) => (Kind::Fit, f),
            Command::NoiseSweep(f) => (Kind::NoiseSweep, f),
            Command::Policy(f) => (Kind::Policy, f),
        }
    }
}

#[derive(Debug, Clone, Default, Args)]
#[command(allow_negative_numbers = true)]
pub struct Flags {
    /// TOML config file; flags override its values
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Comma-separated list
    #[arg(long, value_delimiter = ',')]
    pub v: Option<Vec<f64>>,
    #[arg(long, conflicts_with = "q_sweep")]
    pub q: Option<f64>,
    #[arg(long, num_args = 3, value_names = ["START", "STOP", "COUNT"])]
    pub q_sweep: Option<Vec<f64>>,
    /// Comma-separated list
    #[arg(long, value_delimiter = ',')]
    pub copies: Option<Vec<usize>>,
    #[arg(long)]
    pub grid: Option<usize>,
    #[arg(long)]
    pub shots: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub resamples: Option<usize>,
    /// Worker threads (0: all cores)
    #[arg(long)]
    pub jobs: Option<usize>,
    #[arg(long)]
    pub p1: Option<f64>,
    #[arg(long)]
    pub p2: Option<f64>,
    #[arg(long)]
    pub r0: Option<f64>,
    #[arg(long)]
    pub r1: Option<f64>,
    /// Comma-separated noise scales
    #[arg(long, value_delimiter = ',')]
    pub scales: Option<Vec<f64>>,
    #[arg(long)]
    pub fit_tol: Option<f64>,
    #[arg(long)]
    pub restarts: Option<usize>,
    /// Two-qubit circuit file for noise-sweep
    #[arg(long, value_name = "FILE")]
    pub circuit: Option<PathBuf>,
    /// Where fit writes the circuit file
    #[arg(long, value_name = "FILE")]
    pub circuit_out: Option<PathBuf>,
    #[arg(long)]
    pub single_gates: Option<usize>,
    #[arg(long)]
    pub two_gates: Option<usize>,
    /// Monte-Carlo shots for the policy check (0: skip)
    #[arg(long)]
    pub check_shots: Option<u64>,
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
    /// Print the effective config as TOML and exit
    #[arg(long)]
    pub dump_config: bool,
}

impl Flags {
    /// Defaults, then the config file, then these flags.
    pub fn resolve(&self) -> Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        macro_rules! set {
            ($($f:ident),*) => {$(
                if let Some(x) = &self.$f {
                    cfg.$f = x.clone();
                }
            )*};
        }
        set!(
            alpha,
            v,
            copies,
            grid,
            shots,
            seed,
            resamples,
            jobs,
            p1,
            p2,
            r0,
            r1,
            scales,
            fit_tol,
            restarts,
            check_shots
        );
        macro_rules! set_opt {
            ($($f:ident),*) => {$(
                if self.$f.is_some() {
                    cfg.$f = self.$f.clone();
                }
            )*};
        }
        set_opt!(circuit, circuit_out, single_gates, two_gates, out);
        if let Some(q) = self.q {
            cfg.q = q;
            cfg.q_sweep = None;
        }
        if let Some(s) = &self.q_sweep {
            let count = s[2];
            if !(count >= 0.0 && count.fract() == 0.0) {
                return Err(CliError::field("q_sweep", format!("count {count} is not a whole number")));
            }
            cfg.q_sweep = Some(QSweep { start: s[0], stop: s[1], count: count as usize });
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> (Kind, Flags) {
        Cli::try_parse_from(std::iter::once("qsd").chain(args.iter().copied())).unwrap().command.split()
    }

    #[test]
    fn flags_override_defaults() {
        let (kind, flags) = parse(&["gap", "--v", "0.05,0.1", "--q-sweep", "0", "1", "11", "--copies", "2,3"]);
        assert_eq!(kind, Kind::Gap);
        let cfg = flags.resolve().unwrap();
        assert_eq!(cfg.v, vec![0.05, 0.1]);
        assert_eq!(cfg.copies, vec![2, 3]);
        assert_eq!(cfg.q_values().len(), 11);
    }

    #[test]
    fn q_and_sweep_conflict() {
        assert!(Cli::try_parse_from(["qsd", "helstrom", "--q", "0.2", "--q-sweep", "0", "1", "3"]).is_err());
    }

    #[test]
    fn invalid_values_name_the_field() {
        let (_, flags) = parse(&["helstrom", "--v", "1.2"]);
        assert!(matches!(flags.resolve(), Err(CliError::Field { field, .. }) if field == "v"));
        let (_, flags) = parse(&["helstrom", "--q", "-0.1"]);
        assert!(matches!(flags.resolve(), Err(CliError::Field { field, .. }) if field == "q"));
        let (_, flags) = parse(&["helstrom", "--q-sweep", "0", "1", "2.5"]);
        assert!(matches!(flags.resolve(), Err(CliError::Field { field, .. }) if field == "q_sweep"));
    }
}
