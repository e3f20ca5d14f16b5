//! Run configuration: built-in defaults, overlaid by a TOML file, overlaid
//! by command-line flags.

use std::path::PathBuf;

use qsd_core::locc::DEFAULT_GRID_SIZE;
use qsd_core::noise::{GateCounts, NoiseModel};
use qsd_core::state::DEFAULT_COPY_CAP;
use qsd_core::stats::{DEFAULT_BOOTSTRAP_RESAMPLES, MIN_BOOTSTRAP_RESAMPLES};
use qsd_core::DiscriminationProblem;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

/// `count` evenly spaced priors from `start` to `stop` inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QSweep {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl QSweep {
    pub fn points(&self) -> Vec<f64> {
        let step = (self.stop - self.start) / (self.count - 1) as f64;
        (0..self.count).map(|k| if k + 1 == self.count { self.stop } else { self.start + k as f64 * step }).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub alpha: f64,
    /// One or more mixedness values; each gets its own rows.
    pub v: Vec<f64>,
    pub q: f64,
    /// Overrides `q` when present.
    pub q_sweep: Option<QSweep>,
    pub copies: Vec<usize>,
    pub grid: usize,
    pub shots: u64,
    pub seed: u64,
    pub resamples: usize,
    /// Worker threads; 0 means available parallelism.
    pub jobs: usize,
    pub p1: f64,
    pub p2: f64,
    pub r0: f64,
    pub r1: f64,
    pub scales: Vec<f64>,
    pub fit_tol: f64,
    pub restarts: usize,
    /// Circuit file used by `noise-sweep` for two copies instead of fitting.
    pub circuit: Option<PathBuf>,
    /// Where `fit` writes the circuit file.
    pub circuit_out: Option<PathBuf>,
    /// Effective gate budget for the uncompiled three-/four-copy
    /// measurements; defaults depend on the copy count.
    pub single_gates: Option<usize>,
    pub two_gates: Option<usize>,
    /// Monte-Carlo check shots for `policy`; 0 skips the check.
    pub check_shots: u64,
    pub out: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        let noise = NoiseModel::default();
        Self {
            alpha: std::f64::consts::FRAC_PI_4,
            v: vec![0.1],
            q: 0.75,
            q_sweep: None,
            copies: vec![2],
            grid: DEFAULT_GRID_SIZE,
            shots: 200_000,
            seed: 0,
            resamples: DEFAULT_BOOTSTRAP_RESAMPLES,
            jobs: 0,
            p1: noise.p1,
            p2: noise.p2,
            r0: noise.r0,
            r1: noise.r1,
            scales: vec![0.0, 0.2, 0.4, 0.6, 0.8, 1.0],
            fit_tol: 1e-8,
            restarts: 20,
            circuit: None,
            circuit_out: None,
            single_gates: None,
            two_gates: None,
            check_shots: 0,
            out: None,
        }
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| CliError::Parse(e.to_string()))?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config is always representable in TOML")
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_toml(&text).map_err(|e| match e {
            CliError::Parse(msg) => CliError::Parse(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha <= std::f64::consts::FRAC_PI_2) {
            return Err(CliError::field("alpha", format!("{} is outside (0, pi/2]", self.alpha)));
        }
        if self.v.is_empty() {
            return Err(CliError::field("v", "needs at least one value"));
        }
        if let Some(v) = self.v.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(CliError::field("v", format!("{v} is outside [0, 1]")));
        }
        if !(0.0..=1.0).contains(&self.q) {
            return Err(CliError::field("q", format!("{} is outside [0, 1]", self.q)));
        }
        if let Some(s) = self.q_sweep {
            if s.count < 2 {
                return Err(CliError::field("q_sweep", format!("count must be >= 2, got {}", s.count)));
            }
            for (name, x) in [("start", s.start), ("stop", s.stop)] {
                if !(0.0..=1.0).contains(&x) {
                    return Err(CliError::field("q_sweep", format!("{name} {x} is outside [0, 1]")));
                }
            }
        }
        if self.copies.is_empty() {
            return Err(CliError::field("copies", "needs at least one value"));
        }
        if let Some(m) = self.copies.iter().find(|m| !(1..=DEFAULT_COPY_CAP).contains(*m)) {
            return Err(CliError::field("copies", format!("{m} is outside 1..={DEFAULT_COPY_CAP}")));
        }
        if self.grid < 3 {
            return Err(CliError::field("grid", format!("must be >= 3, got {}", self.grid)));
        }
        if self.shots == 0 {
            return Err(CliError::field("shots", "must be >= 1"));
        }
        if self.resamples < MIN_BOOTSTRAP_RESAMPLES {
            return Err(CliError::field("resamples", format!("must be >= {MIN_BOOTSTRAP_RESAMPLES}")));
        }
        for (name, x) in [("p1", self.p1), ("p2", self.p2), ("r0", self.r0), ("r1", self.r1)] {
            if !(0.0..=1.0).contains(&x) {
                return Err(CliError::field(name, format!("{x} is outside [0, 1]")));
            }
        }
        for &s in &self.scales {
            self.noise().with_scale(s).map_err(|e| CliError::field("scales", e.to_string()))?;
        }
        if !(self.fit_tol > 0.0 && self.fit_tol < 1.0) {
            return Err(CliError::field("fit_tol", format!("{} is outside (0, 1)", self.fit_tol)));
        }
        if self.restarts == 0 {
            return Err(CliError::field("restarts", "must be >= 1"));
        }
        // TOML integers are signed 64-bit.
        let counts = [
            ("seed", self.seed),
            ("shots", self.shots),
            ("check_shots", self.check_shots),
            ("grid", self.grid as u64),
            ("resamples", self.resamples as u64),
            ("jobs", self.jobs as u64),
            ("restarts", self.restarts as u64),
            ("single_gates", self.single_gates.unwrap_or(0) as u64),
            ("two_gates", self.two_gates.unwrap_or(0) as u64),
            ("q_sweep", self.q_sweep.map_or(0, |s| s.count as u64)),
        ];
        if let Some((name, x)) = counts.iter().find(|(_, x)| *x > i64::MAX as u64) {
            return Err(CliError::field(name, format!("{x} exceeds {}", i64::MAX)));
        }
        Ok(())
    }

    pub fn q_values(&self) -> Vec<f64> {
        match self.q_sweep {
            Some(s) => s.points(),
            None => vec![self.q],
        }
    }

    /// Base noise model at scale 1.
    pub fn noise(&self) -> NoiseModel {
        NoiseModel { p1: self.p1, p2: self.p2, r0: self.r0, r1: self.r1, scale: 1.0 }
    }

    pub fn gate_counts(&self, copies: usize) -> Result<GateCounts> {
        let default = GateCounts::default_for(copies).map_err(|e| CliError::field("copies", e.to_string()))?;
        Ok(GateCounts {
            single: self.single_gates.unwrap_or(default.single),
            two: self.two_gates.unwrap_or(default.two),
        })
    }

    /// The single (v, q, M) a non-sweeping command runs on.
    pub fn single_problem(&self) -> Result<DiscriminationProblem> {
        if self.v.len() != 1 {
            return Err(CliError::field("v", "this command takes a single value"));
        }
        if self.q_sweep.is_some() {
            return Err(CliError::field("q_sweep", "this command takes a single q"));
        }
        if self.copies.len() != 1 {
            return Err(CliError::field("copies", "this command takes a single value"));
        }
        Ok(DiscriminationProblem::new(self.alpha, self.v[0], self.q, self.copies[0])?)
    }

    /// The (v, q) pair for commands that accept several copy counts.
    pub fn single_v_q(&self) -> Result<(f64, f64)> {
        if self.v.len() != 1 {
            return Err(CliError::field("v", "this command takes a single value"));
        }
        if self.q_sweep.is_some() {
            return Err(CliError::field("q_sweep", "this command takes a single q"));
        }
        Ok((self.v[0], self.q))
    }
}
