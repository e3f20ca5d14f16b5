//! Backward-induction solver for the optimal adaptive local strategy.

use std::f64::consts::FRAC_PI_2;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{
    branch, last_copy_optimal_angle, last_copy_risk, reduce_angle, stage_risk, terminal_risk, Likelihoods, Outcome,
};
use crate::collective::helstrom_error;
use crate::error::{Error, Result};
use crate::optimize::scan_then_refine;
use crate::state::DiscriminationProblem;
use crate::stats::{rng_for, ErrorEstimate, DEFAULT_BOOTSTRAP_RESAMPLES};

pub const DEFAULT_GRID_SIZE: usize = 2501;

/// Coarse angle scan resolution over one π/2 period.
const COARSE_ANGLES: usize = 181;
const ANGLE_TOL: f64 = 1e-10;
/// Number of coarse-scan local minima refined per grid point.
const REFINE_MINIMA: usize = 3;
const SHOT_CHUNK: u64 = 8192;

/// Tabulated policy and value function on a uniform grid of priors.
///
/// Stage `s` (1-based) is the `s`-th measurement. `angles(s)[i]` is the
/// optimal angle for stage `s` at prior `q_i`; `risks(m)[i]` is `R_m(q_i)`,
/// the optimal expected error with `M − m` copies left. The last stage uses
/// the closed-form angle, so `R_{M−1}` is exact everywhere.
///
/// Off-grid priors are handled by interpolating the *angle* table and then
/// evaluating the resulting strategy exactly through the remaining stages.
/// The value returned is therefore always the error of a concrete strategy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolicyTable {
    alpha: f64,
    v: f64,
    copies: usize,
    grid_size: usize,
    angle: Vec<Vec<f64>>,
    risk: Vec<Vec<f64>>,
}

impl PolicyTable {
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn v(&self) -> f64 {
        self.v
    }

    pub fn copies(&self) -> usize {
        self.copies
    }

    pub fn grid_size(&self) -> usize {
        self.grid_size
    }

    pub fn grid_point(&self, i: usize) -> f64 {
        i as f64 / (self.grid_size - 1) as f64
    }

    pub fn q_grid(&self) -> Vec<f64> {
        (0..self.grid_size).map(|i| self.grid_point(i)).collect()
    }

    /// Tabulated angles of stage `stage` (1..=M).
    pub fn angles(&self, stage: usize) -> &[f64] {
        &self.angle[stage - 1]
    }

    /// Tabulated `R_m` for m in 0..=M.
    pub fn risks(&self, m: usize) -> &[f64] {
        &self.risk[m]
    }

    /// Measurement angle the policy uses at `stage` with current prior `q`.
    pub fn angle_at(&self, stage: usize, q: f64) -> f64 {
        self.step(stage, q).0
    }

    /// `R_m(q)` of the tabulated policy.
    pub fn risk_at(&self, m: usize, q: f64) -> f64 {
        if m >= self.copies {
            terminal_risk(q)
        } else {
            self.step(m + 1, q).1
        }
    }

    /// Expected error when all copies remain, with the first angle
    /// re-optimized at the exact prior.
    pub fn optimal_error(&self, q: f64) -> f64 {
        self.first_step(q).1
    }

    /// First measurement angle and the resulting `R_0(q)`.
    pub fn first_step(&self, q: f64) -> (f64, f64) {
        let tabulated = self.step(1, q);
        if self.copies == 1 {
            return tabulated;
        }
        let fresh = self.optimize(1, q);
        if fresh.1 < tabulated.1 {
            fresh
        } else {
            tabulated
        }
    }

    /// Σ_D Pr[D | q, φ] · R_stage(q'_D).
    fn lookahead(&self, stage: usize, q: f64, phi: f64) -> f64 {
        if stage == self.copies {
            return stage_risk(q, phi, terminal_risk, self.alpha, self.v);
        }
        let lik = Likelihoods::new(phi, self.alpha, self.v);
        Outcome::BOTH
            .iter()
            .map(|&d| match branch(q, &lik, d) {
                (pr, Some(post)) => pr * self.risk_at(stage, post),
                (_, None) => 0.0,
            })
            .sum()
    }

    fn optimize(&self, stage: usize, q: f64) -> (f64, f64) {
        let (phi, value) = scan_then_refine(
            |phi| self.lookahead(stage, q, phi),
            0.0,
            FRAC_PI_2,
            COARSE_ANGLES,
            ANGLE_TOL,
            REFINE_MINIMA,
        );
        (reduce_angle(phi), value)
    }

    /// (angle, R_{stage−1}(q)) for the policy at `stage`.
    fn step(&self, stage: usize, q: f64) -> (f64, f64) {
        if stage == self.copies {
            let phi = last_copy_optimal_angle(q, self.alpha);
            return (phi, last_copy_risk(q, self.alpha, self.v));
        }
        let table = &self.angle[stage - 1];
        let n = self.grid_size;
        let t = q.clamp(0.0, 1.0) * (n - 1) as f64;
        let i = (t.floor() as usize).min(n - 2);
        let w = t - i as f64;

        let a = table[i];
        let b = unwrap_near(table[i + 1], a);
        let d = b - a;
        let interp = a + w * d;

        let left = (i > 0).then(|| a - unwrap_near(table[i - 1], a));
        let right = (i + 2 < n).then(|| unwrap_near(table[i + 2], b) - b);
        let neighbour = left.unwrap_or(0.0).abs().max(right.unwrap_or(0.0).abs());
        let smooth = d.abs() <= 4.0 * neighbour + 1e-9;

        if smooth {
            return (reduce_angle(interp), self.lookahead(stage, q, interp));
        }

        // The optimal angle jumps inside this cell: try each branch
        // extrapolated from its own side as well as the endpoints.
        let mut candidates = vec![interp, a, b];
        if let Some(dl) = left {
            candidates.push(a + w * dl);
        }
        if let Some(dr) = right {
            candidates.push(b - (1.0 - w) * dr);
        }
        candidates
            .into_iter()
            .map(|phi| (reduce_angle(phi), self.lookahead(stage, q, phi)))
            .min_by(|x, y| x.1.total_cmp(&y.1))
            .expect("at least one candidate")
    }
}

/// `phi` shifted by a multiple of π/2 to lie within π/4 of `reference`.
fn unwrap_near(phi: f64, reference: f64) -> f64 {
    phi - FRAC_PI_2 * ((phi - reference) / FRAC_PI_2).round()
}

/// Fill the policy and risk tables backward from the last copy.
pub fn dp_solve(problem: &DiscriminationProblem, grid_size: usize) -> Result<PolicyTable> {
    problem.validate()?;
    if grid_size < 3 {
        return Err(Error::Domain(format!("grid size {grid_size} < 3")));
    }
    let m = problem.copies;
    let mut table = PolicyTable {
        alpha: problem.alpha,
        v: problem.v,
        copies: m,
        grid_size,
        angle: vec![Vec::new(); m],
        risk: vec![Vec::new(); m + 1],
    };
    let grid = table.q_grid();

    table.risk[m] = grid.iter().map(|&q| terminal_risk(q)).collect();
    table.angle[m - 1] = grid.iter().map(|&q| last_copy_optimal_angle(q, problem.alpha)).collect();
    table.risk[m - 1] = grid.iter().map(|&q| last_copy_risk(q, problem.alpha, problem.v)).collect();

    for stage in (1..m).rev() {
        let solved: Vec<(f64, f64)> = grid.par_iter().map(|&q| table.optimize(stage, q)).collect();
        let (angles, risks): (Vec<f64>, Vec<f64>) = solved.into_iter().unzip();
        table.angle[stage - 1] = angles;
        table.risk[stage - 1] = risks;
    }
    Ok(table)
}

/// Optimal LOCC and collective errors and their difference.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GapResult {
    pub p_locc: f64,
    pub p_col: f64,
    pub delta: f64,
}

impl GapResult {
    pub fn new(p_locc: f64, p_col: f64) -> Self {
        Self { p_locc, p_col, delta: p_locc - p_col }
    }
}

/// Δ_M at the problem's prior, using the default grid.
pub fn gap(problem: &DiscriminationProblem) -> Result<GapResult> {
    let table = dp_solve(problem, DEFAULT_GRID_SIZE)?;
    Ok(GapResult::new(table.optimal_error(problem.q), helstrom_error(problem)?))
}

/// Monte-Carlo run of the adaptive policy: draw the true state from the
/// prior, measure each copy at the policy's angle for the current
/// posterior, and guess the more likely state at the end.
pub fn simulate_policy(
    policy: &PolicyTable,
    problem: &DiscriminationProblem,
    shots: u64,
    seed: u64,
) -> Result<ErrorEstimate> {
    problem.validate()?;
    if shots == 0 {
        return Err(Error::Domain("shots must be >= 1".into()));
    }
    if policy.alpha != problem.alpha || policy.v != problem.v || policy.copies != problem.copies {
        return Err(Error::Domain("policy was built for a different (alpha, v, M)".into()));
    }
    let (first_angle, _) = policy.first_step(problem.q);
    let chunks = shots.div_ceil(SHOT_CHUNK);

    let errors: u64 = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = rng_for(seed, c);
            let n = SHOT_CHUNK.min(shots - c * SHOT_CHUNK);
            (0..n)
                .filter(|_| {
                    let truth_plus = rng.gen::<f64>() < problem.q;
                    let mut q = problem.q;
                    for stage in 1..=policy.copies {
                        let phi = if stage == 1 { first_angle } else { policy.angle_at(stage, q) };
                        let lik = Likelihoods::new(phi, problem.alpha, problem.v);
                        let p_zero = if truth_plus { lik.zero_given_plus } else { lik.zero_given_minus };
                        let d = if rng.gen::<f64>() < p_zero { Outcome::Zero } else { Outcome::One };
                        if let (_, Some(post)) = branch(q, &lik, d) {
                            q = post;
                        }
                    }
                    let guess_plus = q > 0.5;
                    guess_plus != truth_plus
                })
                .count() as u64
        })
        .sum();

    ErrorEstimate::from_counts(errors, shots, seed, DEFAULT_BOOTSTRAP_RESAMPLES)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::collective::single_copy_closed_form;
    use std::f64::consts::FRAC_PI_4;

    fn problem(q: f64, m: usize) -> DiscriminationProblem {
        DiscriminationProblem::new(FRAC_PI_4, 0.1, q, m).unwrap()
    }

    #[test]
    fn rejects_small_grid() {
        assert!(matches!(dp_solve(&problem(0.5, 2), 2), Err(Error::Domain(_))));
    }

    #[test]
    fn certain_priors_have_zero_risk() {
        for m in 1..=3 {
            let t = dp_solve(&problem(0.5, m), 201).unwrap();
            assert_eq!(t.optimal_error(0.0), 0.0);
            assert_eq!(t.optimal_error(1.0), 0.0);
            for row in 0..=m {
                assert_eq!(t.risks(row)[0], 0.0);
                assert_eq!(*t.risks(row).last().unwrap(), 0.0);
            }
        }
    }

    #[test]
    fn uninformative_states_reduce_to_guessing() {
        let p = DiscriminationProblem::new(0.8, 1.0, 0.3, 3).unwrap();
        let t = dp_solve(&p, 101).unwrap();
        for m in 0..=3 {
            for (i, r) in t.risks(m).iter().enumerate() {
                assert!((r - terminal_risk(t.grid_point(i))).abs() < 1e-15);
            }
        }
        assert!((t.optimal_error(0.3) - 0.3).abs() < 1e-15);
    }

    #[test]
    fn single_copy_matches_closed_form() {
        let t = dp_solve(&problem(0.5, 1), 101).unwrap();
        for k in 0..=100 {
            let q = k as f64 / 100.0;
            let want = single_copy_closed_form(FRAC_PI_4, 0.1, q);
            assert!((t.optimal_error(q) - want).abs() < 1e-9);
        }
    }

    #[test]
    fn two_copies_equal_prior_matches_helstrom() {
        let p = problem(0.5, 2);
        let g = gap(&p).unwrap();
        assert!(g.delta.abs() < 1e-9, "{g:?}");
    }

    #[test]
    fn tables_are_well_formed() {
        let t = dp_solve(&problem(0.5, 3), 301).unwrap();
        assert_eq!(t.q_grid().len(), 301);
        for m in 0..=3 {
            assert!(t.risks(m).iter().all(|r| (0.0..=0.5).contains(r)));
        }
        for s in 1..=3 {
            assert!(t.angles(s).iter().all(|a| (0.0..FRAC_PI_2).contains(a)));
        }
        // R_m ≤ R_{m+1}: one more measurement never hurts.
        for m in 0..3 {
            for (a, b) in t.risks(m).iter().zip(t.risks(m + 1)) {
                assert!(*a <= b + 1e-12);
            }
        }
    }

    #[test]
    fn unwrap_picks_nearest_period() {
        assert!((unwrap_near(1.5, 0.05) - (1.5 - FRAC_PI_2)).abs() < 1e-15);
        assert_eq!(unwrap_near(0.3, 0.2), 0.3);
    }

    #[test]
    fn simulation_edge_cases() {
        let p = problem(1.0, 2);
        let t = dp_solve(&p, 101).unwrap();
        let est = simulate_policy(&t, &p, 5000, 3).unwrap();
        assert_eq!(est.p_err, 0.0);

        let flat = DiscriminationProblem::new(0.8, 1.0, 0.3, 2).unwrap();
        let t = dp_solve(&flat, 101).unwrap();
        let est = simulate_policy(&t, &flat, 100_000, 11).unwrap();
        assert!(est.within(0.3, 4.0), "{est:?}");

        assert!(simulate_policy(&t, &problem(0.3, 2), 10, 0).is_err());
    }
}
