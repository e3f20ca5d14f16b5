//! Collective (entangling) measurements: the Helstrom observable Γ, its
//! error bound, the sign-of-Γ projective measurement, and error probability
//! of arbitrary two-hypothesis POVMs.

use crate::error::{Error, Result};
use crate::linalg::HermitianOperator;
use crate::state::{DiscriminationProblem, Hypothesis};

/// Element-wise PSD and completeness tolerance for [`Povm`].
pub const POVM_TOL: f64 = 1e-10;

/// Positive operators summing to the identity, each tagged with the
/// hypothesis guessed when it clicks.
#[derive(Clone, Debug)]
pub struct Povm {
    elements: Vec<HermitianOperator>,
    decisions: Vec<Hypothesis>,
}

impl Povm {
    pub fn new(elements: Vec<HermitianOperator>, decisions: Vec<Hypothesis>) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::InvalidPovm("no elements".into()));
        }
        if elements.len() != decisions.len() {
            return Err(Error::InvalidPovm(format!("{} elements but {} decisions", elements.len(), decisions.len())));
        }
        let dim = elements[0].dim();
        let mut total = HermitianOperator::zeros(dim);
        for (k, e) in elements.iter().enumerate() {
            if e.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: e.dim() });
            }
            let min = e.eigenvalues()?[0];
            if min < -POVM_TOL {
                return Err(Error::InvalidPovm(format!("element {k} has eigenvalue {min:e}")));
            }
            total = total.combine(1.0, e, 1.0);
        }
        let defect = total.matrix().max_abs_diff(HermitianOperator::identity(dim).matrix());
        if defect > POVM_TOL {
            return Err(Error::InvalidPovm(format!("elements sum to I only within {defect:e}")));
        }
        Ok(Self { elements, decisions })
    }

    pub fn elements(&self) -> &[HermitianOperator] {
        &self.elements
    }

    pub fn decisions(&self) -> &[Hypothesis] {
        &self.decisions
    }

    pub fn dim(&self) -> usize {
        self.elements[0].dim()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Sum of the elements that lead to guessing `h`.
    pub fn decision_operator(&self, h: Hypothesis) -> HermitianOperator {
        self.elements
            .iter()
            .zip(&self.decisions)
            .filter(|(_, d)| **d == h)
            .fold(HermitianOperator::zeros(self.dim()), |acc, (e, _)| acc.combine(1.0, e, 1.0))
    }
}

/// Γ together with the measurement attaining its bound.
#[derive(Clone, Debug)]
pub struct HelstromSolution {
    pub gamma: HermitianOperator,
    pub error_probability: f64,
    /// Two elements: projector onto Γ > 0 (guess ρ₊), then its complement
    /// (guess ρ₋).
    pub povm: Povm,
}

/// Γ = q ρ₊^{⊗M} − (1−q) ρ₋^{⊗M}.
pub fn gamma(problem: &DiscriminationProblem) -> Result<HermitianOperator> {
    problem.validate()?;
    let plus = problem.copies_state(Hypothesis::Plus)?;
    let minus = problem.copies_state(Hypothesis::Minus)?;
    Ok(plus.operator().combine(problem.q, minus.operator(), -(1.0 - problem.q)))
}

/// Helstrom bound (1 − ‖Γ‖₁)/2, clamped into [0, min(q, 1−q)] against
/// rounding.
pub fn helstrom_error(problem: &DiscriminationProblem) -> Result<f64> {
    let norm = gamma(problem)?.trace_norm()?;
    Ok(clamp_error(0.5 * (1.0 - norm), problem.q))
}

fn clamp_error(p: f64, q: f64) -> f64 {
    p.clamp(0.0, q.min(1.0 - q))
}

/// Closed-form single-copy Helstrom bound from the 2×2 eigenvalues
/// λ± = ((2q−1) ± (1−v)√((2q−1)²cos²α + sin²α))/2.
pub fn single_copy_closed_form(alpha: f64, v: f64, q: f64) -> f64 {
    let bias = 2.0 * q - 1.0;
    let radius = (1.0 - v) * (bias * bias * alpha.cos().powi(2) + alpha.sin().powi(2)).sqrt();
    0.5 * (1.0 - bias.abs().max(radius))
}

/// The sign-of-Γ measurement. Zero eigenvalues go to the ρ₋ projector.
pub fn helstrom_povm(problem: &DiscriminationProblem) -> Result<HelstromSolution> {
    let gamma = gamma(problem)?;
    let eigen = gamma.eig()?;
    let dim = gamma.dim();
    let scale = eigen.values.iter().map(|l| l.abs()).fold(0.0, f64::max);
    // Eigenvalues within rounding of zero count as zero.
    let zero_tol = 1e-14 * scale.max(1e-300);

    let mut plus = crate::linalg::ComplexMatrix::zeros(dim);
    for (k, &lambda) in eigen.values.iter().enumerate() {
        if lambda > zero_tol {
            plus = &plus + &crate::linalg::ComplexMatrix::outer(&eigen.vector(k));
        }
    }
    let plus = HermitianOperator::new(plus)?;
    let minus = HermitianOperator::identity(dim).combine(1.0, &plus, -1.0);
    let povm = Povm::new(vec![plus, minus], vec![Hypothesis::Plus, Hypothesis::Minus])?;

    let norm: f64 = eigen.values.iter().map(|l| l.abs()).sum();
    Ok(HelstromSolution { gamma, error_probability: clamp_error(0.5 * (1.0 - norm), problem.q), povm })
}

/// q·P(guess ρ₋ | ρ₊) + (1−q)·P(guess ρ₊ | ρ₋).
pub fn error_probability(povm: &Povm, problem: &DiscriminationProblem) -> Result<f64> {
    problem.validate()?;
    let dim = 1usize << problem.copies;
    if povm.dim() != dim {
        return Err(Error::DimensionMismatch { expected: dim, got: povm.dim() });
    }
    let plus = problem.copies_state(Hypothesis::Plus)?;
    let minus = problem.copies_state(Hypothesis::Minus)?;
    let mut miss_plus = 0.0;
    let mut miss_minus = 0.0;
    for (e, d) in povm.elements.iter().zip(&povm.decisions) {
        match d {
            Hypothesis::Minus => miss_plus += plus.expectation(e),
            Hypothesis::Plus => miss_minus += minus.expectation(e),
        }
    }
    Ok(problem.q * miss_plus + (1.0 - problem.q) * miss_minus)
}
