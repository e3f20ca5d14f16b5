//! Exhaustive two-copy search over (φ₁, φ₂|D₁=0, φ₂|D₁=1).
//!
//! This is a cross-check for [`super::dp_solve`] and deliberately shares none
//! of its machinery: outcome probabilities come from Born-rule traces of the
//! projector matrices, and the objective is the four-leaf joint sum
//!
//! ```text
//! Σ_{i,j} min(q·P₊(i;φ₁)P₊(j;φ₂ᵢ), (1−q)·P₋(i;φ₁)P₋(j;φ₂ᵢ))
//! ```
//!
//! with no posterior bookkeeping and no closed-form angle.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::optimize::scan_then_refine;
use crate::state::{DensityMatrix, DiscriminationProblem, Hypothesis};

use super::projectors;

/// Default scan size and refinement tolerance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BruteForceOptions {
    pub angle_grid: usize,
    pub refine_tol: f64,
}

impl Default for BruteForceOptions {
    fn default() -> Self {
        Self { angle_grid: 360, refine_tol: 1e-10 }
    }
}

struct Born {
    plus: DensityMatrix,
    minus: DensityMatrix,
}

impl Born {
    /// P(outcome 0 | ρ₊), P(outcome 0 | ρ₋) at angle `phi`.
    fn zero(&self, phi: f64) -> (f64, f64) {
        let (p0, _) = projectors(phi);
        (self.plus.expectation(&p0), self.minus.expectation(&p0))
    }
}

/// Minimum expected two-copy LOCC error found by grid search over all three
/// angles in [0, π) followed by golden-section refinement.
pub fn brute_force_two_copy(problem: &DiscriminationProblem, angle_grid: usize, refine_tol: f64) -> Result<f64> {
    problem.validate()?;
    if problem.copies != 2 {
        return Err(Error::Domain(format!("brute force needs M = 2, got {}", problem.copies)));
    }
    if angle_grid < 3 {
        return Err(Error::Domain("angle grid needs at least 3 points".into()));
    }
    let born = Born { plus: problem.state(Hypothesis::Plus)?, minus: problem.state(Hypothesis::Minus)? };
    let q = problem.q;

    // Best second measurement given the joint weights of the first outcome.
    let second = |w_plus: f64, w_minus: f64| -> f64 {
        if w_plus <= 0.0 || w_minus <= 0.0 {
            return w_plus.min(w_minus).max(0.0);
        }
        let leaf = |phi: f64| {
            let (a, b) = born.zero(phi);
            (w_plus * a).min(w_minus * b) + (w_plus * (1.0 - a)).min(w_minus * (1.0 - b))
        };
        scan_then_refine(leaf, 0.0, PI, angle_grid, refine_tol, 3).1
    };

    let first = |phi1: f64| -> f64 {
        let (a, b) = born.zero(phi1);
        second(q * a, (1.0 - q) * b) + second(q * (1.0 - a), (1.0 - q) * (1.0 - b))
    };

    Ok(scan_then_refine(first, 0.0, PI, angle_grid, refine_tol, 3).1)
}
