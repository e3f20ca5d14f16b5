//! Gate-level measurement circuits.
//!
//! Qubit 0 is the most significant bit of a basis index, i.e. the leftmost
//! tensor factor: `|q0 q1⟩ = |q0⟩ ⊗ |q1⟩`. Gates are listed in application
//! order.

mod ansatz;
mod format;
mod measure;

pub use ansatz::{ansatz_circuit, fit_ansatz, AnsatzFit, AnsatzParams, FitOptions, ANSATZ_PARAMS};
pub use format::{parse_circuit, write_circuit};
pub use measure::{measurement_unitary, MeasurementBasis};

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;

/// Tolerance on `U U† = I` for circuits and fit targets.
pub const UNITARY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Gate {
    /// exp(−iθσ_y/2)
    Ry {
        qubit: usize,
        theta: f64,
    },
    /// exp(−iθσ_z/2)
    Rz {
        qubit: usize,
        theta: f64,
    },
    /// [[cos θ/2, −e^{iλ} sin θ/2], [e^{iφ} sin θ/2, e^{i(φ+λ)} cos θ/2]]
    U3 {
        qubit: usize,
        theta: f64,
        phi: f64,
        lambda: f64,
    },
    Cnot {
        control: usize,
        target: usize,
    },
}

impl Gate {
    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Gate::Ry { qubit, .. } | Gate::Rz { qubit, .. } | Gate::U3 { qubit, .. } => vec![qubit],
            Gate::Cnot { control, target } => vec![control, target],
        }
    }

    pub fn is_two_qubit(&self) -> bool {
        matches!(self, Gate::Cnot { .. })
    }

    fn angles(&self) -> Vec<f64> {
        match *self {
            Gate::Ry { theta, .. } | Gate::Rz { theta, .. } => vec![theta],
            Gate::U3 { theta, phi, lambda, .. } => vec![theta, phi, lambda],
            Gate::Cnot { .. } => vec![],
        }
    }

    fn validate(&self, width: usize) -> Result<()> {
        if self.angles().iter().any(|a| !a.is_finite()) {
            return Err(Error::InvalidCircuit(format!("non-finite angle in {self:?}")));
        }
        if let Some(q) = self.qubits().into_iter().find(|&q| q >= width) {
            return Err(Error::InvalidCircuit(format!("qubit {q} out of range for width {width}")));
        }
        if let Gate::Cnot { control, target } = *self {
            if control == target {
                return Err(Error::InvalidCircuit(format!("CNOT control == target == {control}")));
            }
        }
        Ok(())
    }
}

/// Local matrix of a gate: 2×2, or 4×4 on (control, target) for CNOT.
pub fn gate_unitary(g: &Gate) -> ComplexMatrix {
    match *g {
        Gate::Ry { theta, .. } => ry(theta),
        Gate::Rz { theta, .. } => rz(theta),
        Gate::U3 { theta, phi, lambda, .. } => u3(theta, phi, lambda),
        Gate::Cnot { .. } => {
            let mut m = ComplexMatrix::zeros(4);
            for (i, j) in [(0, 0), (1, 1), (2, 3), (3, 2)] {
                m[(i, j)] = C64::new(1.0, 0.0);
            }
            m
        }
    }
}

pub(crate) fn ry(theta: f64) -> ComplexMatrix {
    let (s, c) = (0.5 * theta).sin_cos();
    ComplexMatrix::from_vec(2, vec![c.into(), (-s).into(), s.into(), c.into()]).expect("2x2")
}

pub(crate) fn rz(theta: f64) -> ComplexMatrix {
    let h = 0.5 * theta;
    ComplexMatrix::from_vec(2, vec![C64::from_polar(1.0, -h), 0.0.into(), 0.0.into(), C64::from_polar(1.0, h)])
        .expect("2x2")
}

pub(crate) fn u3(theta: f64, phi: f64, lambda: f64) -> ComplexMatrix {
    let (s, c) = (0.5 * theta).sin_cos();
    ComplexMatrix::from_vec(
        2,
        vec![c.into(), -C64::from_polar(s, lambda), C64::from_polar(s, phi), C64::from_polar(c, phi + lambda)],
    )
    .expect("2x2")
}

/// Ordered gate list on `width` qubits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Circuit {
    width: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(width: usize, gates: Vec<Gate>) -> Result<Self> {
        if width == 0 {
            return Err(Error::InvalidCircuit("width must be >= 1".into()));
        }
        for g in &gates {
            g.validate(width)?;
        }
        Ok(Self { width, gates })
    }

    pub fn empty(width: usize) -> Self {
        Self { width, gates: Vec::new() }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn push(&mut self, g: Gate) -> Result<()> {
        g.validate(self.width)?;
        self.gates.push(g);
        Ok(())
    }

    pub fn cnot_count(&self) -> usize {
        self.gates.iter().filter(|g| g.is_two_qubit()).count()
    }
}

/// Embed a gate's local matrix on the full `width`-qubit register.
pub fn embed(g: &Gate, width: usize) -> ComplexMatrix {
    match *g {
        Gate::Cnot { control, target } => {
            let dim = 1usize << width;
            let cbit = 1usize << (width - 1 - control);
            let tbit = 1usize << (width - 1 - target);
            let mut m = ComplexMatrix::zeros(dim);
            for b in 0..dim {
                let out = if b & cbit != 0 { b ^ tbit } else { b };
                m[(out, b)] = C64::new(1.0, 0.0);
            }
            m
        }
        _ => {
            let qubit = g.qubits()[0];
            embed_single(&gate_unitary(g), qubit, width)
        }
    }
}

pub(crate) fn embed_single(local: &ComplexMatrix, qubit: usize, width: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::identity(1);
    for k in 0..width {
        let factor = if k == qubit { local.clone() } else { ComplexMatrix::identity(2) };
        m = m.kron(&factor);
    }
    m
}

/// Product of the embedded gate unitaries, last gate leftmost.
pub fn unitary_of(c: &Circuit) -> ComplexMatrix {
    c.gates.iter().fold(ComplexMatrix::identity(1 << c.width), |acc, g| &embed(g, c.width) * &acc)
}

/// Global-phase-invariant overlap |tr(U†V)|² / d².
pub fn fidelity(u: &ComplexMatrix, v: &ComplexMatrix) -> Result<f64> {
    if u.dim() != v.dim() {
        return Err(Error::DimensionMismatch { expected: u.dim(), got: v.dim() });
    }
    let t: C64 = u.as_slice().iter().zip(v.as_slice()).map(|(a, b)| a.conj() * b).sum();
    let d = u.dim() as f64;
    Ok((t.norm_sqr() / (d * d)).min(1.0))
}
