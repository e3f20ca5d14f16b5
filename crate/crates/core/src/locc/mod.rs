//! Adaptive local measurements: one projective qubit measurement per copy,
//! each angle chosen from the current posterior.
//!
//! The recursion runs backward from the final guess. With `M − m` copies
//! left and prior `q`, the expected error is
//!
//! ```text
//! R_M(q)     = min(q, 1 − q)
//! R_{m−1}(q) = min_φ Σ_D Pr[D | q, φ] · R_m(q'_D)
//! ```
//!
//! where `q'_D` is the Bayes posterior after outcome `D`. The last
//! measurement has a closed-form optimal angle; the others are tabulated by
//! [`dp_solve`].

mod brute;
mod dp;

pub use brute::{brute_force_two_copy, BruteForceOptions};
pub use dp::{dp_solve, gap, simulate_policy, GapResult, PolicyTable, DEFAULT_GRID_SIZE};

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, HermitianOperator};

/// Outcome of one local measurement: which projector clicked.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Outcome {
    Zero,
    One,
}

impl Outcome {
    pub const BOTH: [Outcome; 2] = [Outcome::Zero, Outcome::One];

    pub fn index(self) -> u8 {
        match self {
            Outcome::Zero => 0,
            Outcome::One => 1,
        }
    }
}

/// Projective measurement {|ψ⟩⟨ψ|, |ψ⊥⟩⟨ψ⊥|} with |ψ⟩ = cos φ|0⟩ + sin φ|1⟩.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LocalMeasurement {
    phi: f64,
}

impl LocalMeasurement {
    /// Angle reduced into [0, π).
    pub fn new(phi: f64) -> Self {
        Self { phi: phi.rem_euclid(std::f64::consts::PI) }
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn projectors(&self) -> (HermitianOperator, HermitianOperator) {
        projectors(self.phi)
    }
}

/// (Π₀, Π₁) for the angle `phi`.
pub fn projectors(phi: f64) -> (HermitianOperator, HermitianOperator) {
    let (s, c) = phi.sin_cos();
    let p0 = ComplexMatrix::outer(&[c.into(), s.into()]);
    let p0 = HermitianOperator::new(p0).expect("rank-one projector is Hermitian");
    let p1 = HermitianOperator::identity(2).combine(1.0, &p0, -1.0);
    (p0, p1)
}

/// Born probabilities of outcome 0 under ρ₊ and ρ₋.
///
/// Both states have Bloch vectors of length 1−v at polar angle ±α in the
/// x–z plane and Π₀(φ) points at polar angle 2φ, so
/// `tr(ρ± Π₀) = (1 + (1−v) cos(2φ ∓ α)) / 2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Likelihoods {
    pub zero_given_plus: f64,
    pub zero_given_minus: f64,
}

impl Likelihoods {
    pub fn new(phi: f64, alpha: f64, v: f64) -> Self {
        let r = 1.0 - v;
        Self {
            zero_given_plus: 0.5 * (1.0 + r * (2.0 * phi - alpha).cos()),
            zero_given_minus: 0.5 * (1.0 + r * (2.0 * phi + alpha).cos()),
        }
    }

    /// (Pr[D | ρ₊], Pr[D | ρ₋]).
    #[inline]
    pub fn given(&self, d: Outcome) -> (f64, f64) {
        match d {
            Outcome::Zero => (self.zero_given_plus, self.zero_given_minus),
            Outcome::One => (1.0 - self.zero_given_plus, 1.0 - self.zero_given_minus),
        }
    }
}

/// Pr[D | q, φ] and the posterior q' for each outcome; `None` marks an
/// impossible outcome.
#[inline]
pub(crate) fn branch(q: f64, lik: &Likelihoods, d: Outcome) -> (f64, Option<f64>) {
    let (lp, lm) = lik.given(d);
    let joint_plus = q * lp;
    let pr = joint_plus + (1.0 - q) * lm;
    if pr <= 0.0 {
        (0.0, None)
    } else {
        (pr, Some((joint_plus / pr).clamp(0.0, 1.0)))
    }
}

/// Bayes update of the prior for ρ₊ after observing `outcome`.
pub fn posterior(q: f64, phi: f64, outcome: Outcome, alpha: f64, v: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&q) {
        return Err(Error::Domain(format!("prior {q} outside [0, 1]")));
    }
    match branch(q, &Likelihoods::new(phi, alpha, v), outcome) {
        (_, Some(post)) => Ok(post),
        (_, None) => Err(Error::ImpossibleOutcome { outcome: outcome.index(), prior: q }),
    }
}

/// Error of guessing the more likely state; ties guess ρ₋.
#[inline]
pub fn terminal_risk(q: f64) -> f64 {
    q.min(1.0 - q)
}

/// Expected next-stage risk after measuring at `phi`. Impossible outcomes
/// contribute nothing.
pub fn stage_risk(q: f64, phi: f64, next_risk: impl Fn(f64) -> f64, alpha: f64, v: f64) -> f64 {
    let lik = Likelihoods::new(phi, alpha, v);
    Outcome::BOTH
        .iter()
        .map(|&d| match branch(q, &lik, d) {
            (pr, Some(post)) => pr * next_risk(post),
            (_, None) => 0.0,
        })
        .sum()
}

/// Optimal angle for the final copy, ½·arccot((2q−1)·cot α), in (0, π/2).
///
/// Written as ½·atan2(sin α, (2q−1) cos α), which agrees with the arccot
/// form for 0 < α < π and stays finite at α = π/2.
pub fn last_copy_optimal_angle(q: f64, alpha: f64) -> f64 {
    0.5 * alpha.sin().atan2((2.0 * q - 1.0) * alpha.cos())
}

/// Risk with one copy left, measured at the closed-form optimal angle.
pub(crate) fn last_copy_risk(q: f64, alpha: f64, v: f64) -> f64 {
    stage_risk(q, last_copy_optimal_angle(q, alpha), terminal_risk, alpha, v)
}

/// Reduce an angle into [0, π/2). The two-outcome measurement at φ + π/2 is
/// the one at φ with labels swapped, so every risk is π/2-periodic in φ.
#[inline]
pub(crate) fn reduce_angle(phi: f64) -> f64 {
    phi.rem_euclid(FRAC_PI_2)
}
