use crate::collective::Povm;
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::state::Hypothesis;

/// Projectors whose eigenvalues are further than this from {0, 1} are not
/// treated as projective.
const PROJECTOR_TOL: f64 = 1e-8;

/// Basis rotation that turns a projective two-outcome POVM into a
/// computational-basis measurement, and the guess attached to each basis
/// outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementBasis {
    pub unitary: ComplexMatrix,
    pub decisions: Vec<Hypothesis>,
}

impl MeasurementBasis {
    /// Identity rotation with an explicit decision per outcome.
    pub fn computational(decisions: Vec<Hypothesis>) -> Self {
        Self { unitary: ComplexMatrix::identity(decisions.len()), decisions }
    }

    /// Outcomes guessed as ρ₋.
    pub fn minus_outcomes(&self) -> usize {
        self.decisions.iter().filter(|d| **d == Hypothesis::Minus).count()
    }
}

/// Rows of the returned unitary are an orthonormal basis adapted to the
/// POVM's ρ₋ subspace: the ρ₋ block occupies the lowest outcome indices,
/// followed by the ρ₊ block. With a rank-one ρ₋ projector on two qubits this
/// sends |00⟩ to ρ₋ and the other three outcomes to ρ₊.
pub fn measurement_unitary(povm: &Povm) -> Result<MeasurementBasis> {
    let dim = povm.dim();
    let minus = povm.decision_operator(Hypothesis::Minus);
    let eigen = minus.eig()?;

    let mut ones = Vec::new();
    let mut zeros = Vec::new();
    for (k, &lambda) in eigen.values.iter().enumerate() {
        if (lambda - 1.0).abs() <= PROJECTOR_TOL {
            ones.push(k);
        } else if lambda.abs() <= PROJECTOR_TOL {
            zeros.push(k);
        } else {
            return Err(Error::RankInconsistency(format!(
                "rho_- decision operator has eigenvalue {lambda}, so the POVM is not projective"
            )));
        }
    }
    // Eigenvalues are ascending, so `ones` sits at the top; keep each block
    // in its eigensolver order.
    let order: Vec<usize> = ones.iter().chain(&zeros).copied().collect();
    let unitary = ComplexMatrix::from_fn(dim, |row, col| eigen.vectors[(col, order[row])].conj());
    let decisions = (0..dim).map(|i| if i < ones.len() { Hypothesis::Minus } else { Hypothesis::Plus }).collect();
    Ok(MeasurementBasis { unitary, decisions })
}
