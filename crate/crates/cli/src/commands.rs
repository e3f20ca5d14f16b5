use qsd_core::circuit::{
    ansatz_circuit, fit_ansatz, measurement_unitary, parse_circuit, write_circuit, Circuit, FitOptions, ANSATZ_PARAMS,
};
use qsd_core::locc::{dp_solve, simulate_policy, PolicyTable};
use qsd_core::noise::{derive_seed, exact_error_probability, multi_copy_measurement_sim, noise_sweep, NoiseModel};
use qsd_core::{helstrom_error, helstrom_povm, DiscriminationProblem, ErrorEstimate, Hypothesis};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::RunConfig;
use crate::error::{CliError, Result};
use crate::table::{Cell, Table};

/// Every (v, M, q) point of the sweep, in output order.
fn sweep_points(cfg: &RunConfig) -> Vec<(f64, usize, f64)> {
    let qs = cfg.q_values();
    let mut pts = Vec::new();
    for &v in &cfg.v {
        for &m in &cfg.copies {
            pts.extend(qs.iter().map(|&q| (v, m, q)));
        }
    }
    pts
}

pub fn cmd_helstrom(cfg: &RunConfig) -> Result<Table> {
    let values = sweep_points(cfg)
        .into_par_iter()
        .map(|(v, m, q)| Ok((v, m, q, helstrom_error(&DiscriminationProblem::new(cfg.alpha, v, q, m)?)?)))
        .collect::<Result<Vec<_>>>()?;
    let mut t = Table::new(vec!["v", "q", "M", "p_col"]);
    for (v, m, q, p) in values {
        t.push(vec![v.into(), q.into(), m.into(), p.into()]);
    }
    Ok(t)
}

/// One policy table per (v, M), in sweep order.
fn policies(cfg: &RunConfig) -> Result<Vec<PolicyTable>> {
    let pairs: Vec<(f64, usize)> = cfg.v.iter().flat_map(|&v| cfg.copies.iter().map(move |&m| (v, m))).collect();
    pairs
        .into_par_iter()
        .map(|(v, m)| Ok(dp_solve(&DiscriminationProblem::new(cfg.alpha, v, 0.5, m)?, cfg.grid)?))
        .collect()
}

pub fn cmd_locc(cfg: &RunConfig) -> Result<Table> {
    let mut t = Table::new(vec!["v", "q", "M", "p_locc"]);
    for table in policies(cfg)? {
        for q in cfg.q_values() {
            t.push(vec![table.v().into(), q.into(), table.copies().into(), table.optimal_error(q).into()]);
        }
    }
    Ok(t)
}

pub fn cmd_gap(cfg: &RunConfig) -> Result<Table> {
    let mut t = Table::new(vec!["v", "q", "M", "p_locc", "p_col", "delta"]);
    for table in policies(cfg)? {
        let rows = cfg
            .q_values()
            .into_par_iter()
            .map(|q| {
                let p = DiscriminationProblem::new(cfg.alpha, table.v(), q, table.copies())?;
                let p_locc = table.optimal_error(q);
                let p_col = helstrom_error(&p)?;
                Ok(vec![
                    table.v().into(),
                    q.into(),
                    table.copies().into(),
                    p_locc.into(),
                    p_col.into(),
                    (p_locc - p_col).into(),
                ])
            })
            .collect::<Result<Vec<Vec<Cell>>>>()?;
        for row in rows {
            t.push(row);
        }
    }
    Ok(t)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub alpha: f64,
    pub v: f64,
    pub q: f64,
    pub copies: usize,
    pub seed: u64,
    pub restarts_used: usize,
    pub fidelity: f64,
    pub p_noiseless: f64,
    pub p_helstrom: f64,
    pub decisions: Vec<Hypothesis>,
    pub params: Vec<f64>,
    pub circuit: String,
}

/// Fitted two-copy measurement circuit and its outcome labels.
fn fitted_measurement(cfg: &RunConfig, p: &DiscriminationProblem) -> Result<(Circuit, Vec<Hypothesis>, FitReport)> {
    if p.copies != 2 {
        return Err(CliError::field("copies", format!("circuit fitting needs 2 copies, got {}", p.copies)));
    }
    let basis = measurement_unitary(&helstrom_povm(p)?.povm)?;
    let opts = FitOptions { tol: cfg.fit_tol, restarts: cfg.restarts, seed: cfg.seed, ..FitOptions::default() };
    let fit = fit_ansatz(&basis.unitary, &opts)?;
    let circuit = ansatz_circuit(&fit.params);
    let p_noiseless = exact_error_probability(p, &circuit, &basis.decisions, &NoiseModel::noiseless())?;
    let report = FitReport {
        alpha: p.alpha,
        v: p.v,
        q: p.q,
        copies: p.copies,
        seed: cfg.seed,
        restarts_used: fit.restarts_used,
        fidelity: fit.fidelity,
        p_noiseless,
        p_helstrom: helstrom_error(p)?,
        decisions: basis.decisions.clone(),
        params: fit.params.0.to_vec(),
        circuit: write_circuit(&circuit),
    };
    debug_assert_eq!(report.params.len(), ANSATZ_PARAMS);
    Ok((circuit, basis.decisions, report))
}

/// Fits the circuit; writes it to `circuit_out` when set.
pub fn cmd_fit(cfg: &RunConfig) -> Result<FitReport> {
    let p = cfg.single_problem()?;
    let (_, _, report) = fitted_measurement(cfg, &p)?;
    if let Some(path) = &cfg.circuit_out {
        std::fs::write(path, &report.circuit)?;
    }
    Ok(report)
}

pub fn cmd_noise_sweep(cfg: &RunConfig) -> Result<Table> {
    let (v, q) = cfg.single_v_q()?;
    let base = cfg.noise();
    let mut t = Table::new(vec!["M", "scale", "p_exact", "p_sampled", "stderr", "p_helstrom"]);
    for &m in &cfg.copies {
        let p = DiscriminationProblem::new(cfg.alpha, v, q, m)?;
        let p_helstrom = helstrom_error(&p)?;
        let rows: Vec<(f64, f64, ErrorEstimate)> = match m {
            2 => {
                let (circuit, decisions) = match &cfg.circuit {
                    Some(path) => {
                        let circuit = parse_circuit(&std::fs::read_to_string(path)?)?;
                        if circuit.width() != 2 {
                            return Err(CliError::field("circuit", "expected a two-qubit circuit"));
                        }
                        let basis = measurement_unitary(&helstrom_povm(&p)?.povm)?;
                        (circuit, basis.decisions)
                    }
                    None => {
                        let (c, d, _) = fitted_measurement(cfg, &p)?;
                        (c, d)
                    }
                };
                noise_sweep(&p, &circuit, &decisions, &base, &cfg.scales, cfg.shots, cfg.seed, cfg.resamples)?
                    .into_iter()
                    .map(|pt| (pt.scale, pt.exact, pt.estimate))
                    .collect()
            }
            3 | 4 => {
                let gates = cfg.gate_counts(m)?;
                cfg.scales
                    .par_iter()
                    .enumerate()
                    .map(|(k, &s)| {
                        let noise = base.with_scale(s)?;
                        let r = multi_copy_measurement_sim(
                            &p,
                            &noise,
                            gates,
                            cfg.shots,
                            derive_seed(cfg.seed, k as u64),
                            cfg.resamples,
                        )?;
                        Ok((s, r.exact, r.estimate))
                    })
                    .collect::<Result<_>>()?
            }
            _ => return Err(CliError::field("copies", format!("noise-sweep supports 2, 3 or 4 copies, got {m}"))),
        };
        for (scale, exact, est) in rows {
            t.push(vec![m.into(), scale.into(), exact.into(), est.p_err.into(), est.stderr.into(), p_helstrom.into()]);
        }
    }
    Ok(t)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolicyReport {
    pub q: f64,
    pub optimal_error: f64,
    pub check: Option<ErrorEstimate>,
    pub policy: PolicyTable,
}

pub fn cmd_policy(cfg: &RunConfig) -> Result<PolicyReport> {
    let p = cfg.single_problem()?;
    let policy = dp_solve(&p, cfg.grid)?;
    let check = match cfg.check_shots {
        0 => None,
        shots => Some(simulate_policy(&policy, &p, shots, cfg.seed)?),
    };
    Ok(PolicyReport { q: p.q, optimal_error: policy.optimal_error(p.q), check, policy })
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}
