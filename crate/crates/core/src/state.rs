//! The two-state qubit family, its tensor powers, and the discrimination
//! problem tuple (α, v, q, M).

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, HermitianOperator};

/// Tolerance on trace and minimum eigenvalue of a density matrix.
pub const STATE_TOL: f64 = 1e-12;

/// Default upper bound on copies (64×64 matrices).
pub const DEFAULT_COPY_CAP: usize = 6;

/// Which of the two candidate states; doubles as a decision label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Hypothesis {
    Plus,
    Minus,
}

impl Hypothesis {
    pub fn sign(self) -> f64 {
        match self {
            Hypothesis::Plus => 1.0,
            Hypothesis::Minus => -1.0,
        }
    }
}

/// A Hermitian, unit-trace, positive semidefinite operator.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    operator: HermitianOperator,
}

impl DensityMatrix {
    pub fn new(operator: HermitianOperator) -> Result<Self> {
        let tr = operator.trace();
        if (tr - 1.0).abs() > STATE_TOL {
            return Err(Error::InvalidState(format!("trace {tr} != 1")));
        }
        let min = operator.eigenvalues()?.first().copied().unwrap_or(0.0);
        if min < -STATE_TOL {
            return Err(Error::InvalidState(format!("negative eigenvalue {min:e}")));
        }
        Ok(Self { operator })
    }

    /// Skips the eigenvalue check; for channel outputs whose validity is
    /// guaranteed by construction.
    pub(crate) fn new_unchecked(operator: HermitianOperator) -> Self {
        Self { operator }
    }

    /// |ψ⟩⟨ψ| for a normalized ket.
    pub fn pure(ket: &[num_complex::Complex64]) -> Result<Self> {
        Self::new(HermitianOperator::new(ComplexMatrix::outer(ket))?)
    }

    /// I/d.
    pub fn maximally_mixed(dim: usize) -> Self {
        let m = ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64);
        Self { operator: HermitianOperator::symmetrized(m) }
    }

    /// Computational basis state |index⟩ on `dim` levels.
    pub fn basis(dim: usize, index: usize) -> Self {
        let mut m = ComplexMatrix::zeros(dim);
        m[(index, index)] = 1.0.into();
        Self { operator: HermitianOperator::symmetrized(m) }
    }

    pub fn operator(&self) -> &HermitianOperator {
        &self.operator
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        self.operator.matrix()
    }

    pub fn dim(&self) -> usize {
        self.operator.dim()
    }

    /// Number of qubits, if the dimension is a power of two.
    pub fn qubits(&self) -> Option<usize> {
        let d = self.dim();
        d.is_power_of_two().then(|| d.trailing_zeros() as usize)
    }

    pub fn kron(&self, other: &Self) -> Self {
        Self { operator: self.operator.kron(&other.operator) }
    }

    /// Populations ⟨i|ρ|i⟩ in the computational basis.
    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.matrix()[(i, i)].re).collect()
    }

    /// Born probability tr(ρ Π).
    pub fn expectation(&self, effect: &HermitianOperator) -> f64 {
        self.operator.trace_product(effect)
    }
}

/// ½(I + (1−v)(σ₃ cos α ± σ₁ sin α)).
pub fn make_state(alpha: f64, v: f64, sign: Hypothesis) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&v) {
        return Err(Error::Domain(format!("v = {v} outside [0, 1]")));
    }
    if !alpha.is_finite() {
        return Err(Error::Domain(format!("alpha = {alpha} is not finite")));
    }
    let r = 1.0 - v;
    let z = r * alpha.cos();
    let x = sign.sign() * r * alpha.sin();
    let m = ComplexMatrix::from_vec(
        2,
        vec![(0.5 * (1.0 + z)).into(), (0.5 * x).into(), (0.5 * x).into(), (0.5 * (1.0 - z)).into()],
    )?;
    DensityMatrix::new(HermitianOperator::new(m)?)
}

/// `ρ^{⊗m}` with the default copy cap.
pub fn tensor_power(rho: &DensityMatrix, m: usize) -> Result<DensityMatrix> {
    tensor_power_capped(rho, m, DEFAULT_COPY_CAP)
}

pub fn tensor_power_capped(rho: &DensityMatrix, m: usize, cap: usize) -> Result<DensityMatrix> {
    if m < 1 {
        return Err(Error::Domain("tensor power needs m >= 1".into()));
    }
    if m > cap {
        return Err(Error::Resource(format!("{m} copies exceeds cap of {cap}")));
    }
    let mut out = rho.clone();
    for _ in 1..m {
        out = out.kron(rho);
    }
    Ok(out)
}

/// Parameters (α, v, q, M) of a two-state discrimination task.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiscriminationProblem {
    pub alpha: f64,
    pub v: f64,
    pub q: f64,
    pub copies: usize,
}

impl DiscriminationProblem {
    pub fn new(alpha: f64, v: f64, q: f64, copies: usize) -> Result<Self> {
        let p = Self { alpha, v, q, copies };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha <= FRAC_PI_2 + 1e-15) {
            return Err(Error::Domain(format!("alpha = {} outside (0, pi/2]", self.alpha)));
        }
        if !(0.0..=1.0).contains(&self.v) {
            return Err(Error::Domain(format!("v = {} outside [0, 1]", self.v)));
        }
        if !(0.0..=1.0).contains(&self.q) {
            return Err(Error::Domain(format!("q = {} outside [0, 1]", self.q)));
        }
        if self.copies < 1 {
            return Err(Error::Domain("copies must be >= 1".into()));
        }
        Ok(())
    }

    pub fn with_q(self, q: f64) -> Self {
        Self { q, ..self }
    }

    pub fn with_copies(self, copies: usize) -> Self {
        Self { copies, ..self }
    }

    pub fn state(&self, h: Hypothesis) -> Result<DensityMatrix> {
        make_state(self.alpha, self.v, h)
    }

    /// `ρ±^{⊗M}`.
    pub fn copies_state(&self, h: Hypothesis) -> Result<DensityMatrix> {
        tensor_power(&self.state(h)?, self.copies)
    }

    /// Prior weight of a hypothesis.
    pub fn prior(&self, h: Hypothesis) -> f64 {
        match h {
            Hypothesis::Plus => self.q,
            Hypothesis::Minus => 1.0 - self.q,
        }
    }
}
