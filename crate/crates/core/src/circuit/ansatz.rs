//! Generic two-qubit circuit with three CNOTs and fifteen angles, and a
//! multi-start quasi-Newton fit of it to a target unitary.
//!
//! Application order:
//!
//! ```text
//! q0: ─U3(p0..3)───⊕──RZ(p6)──●───────────⊕──U3(p9..12)──
//! q1: ─U3(p3..6)───●──RY(p7)──⊕──RY(p8)───●──U3(p12..15)─
//! ```
//!
//! The three-CNOT core with RZ/RY in these slots reaches every canonical
//! class exp(i(a·XX + b·YY + c·ZZ)); the outer U3 layers supply the local
//! equivalence, so the family covers U(4) up to global phase.

use num_complex::Complex64 as C64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{embed, embed_single, fidelity, ry, rz, Circuit, Gate, UNITARY_TOL};
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::stats::rng_for;

pub const ANSATZ_PARAMS: usize = 15;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnsatzParams(pub [f64; ANSATZ_PARAMS]);

impl AnsatzParams {
    pub fn from_slice(p: &[f64]) -> Result<Self> {
        let arr: [f64; ANSATZ_PARAMS] = p
            .try_into()
            .map_err(|_| Error::Domain(format!("ansatz needs {ANSATZ_PARAMS} parameters, got {}", p.len())))?;
        if arr.iter().any(|x| !x.is_finite()) {
            return Err(Error::Domain("non-finite ansatz parameter".into()));
        }
        Ok(Self(arr))
    }

    pub fn random<R: Rng>(rng: &mut R) -> Self {
        let mut p = [0.0; ANSATZ_PARAMS];
        for x in &mut p {
            *x = rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI);
        }
        Self(p)
    }
}

/// How each parameter index enters the circuit: (gate index, angle slot).
const GATE_OF_PARAM: [(usize, usize); ANSATZ_PARAMS] = [
    (0, 0),
    (0, 1),
    (0, 2),
    (1, 0),
    (1, 1),
    (1, 2),
    (3, 0),
    (4, 0),
    (6, 0),
    (8, 0),
    (8, 1),
    (8, 2),
    (9, 0),
    (9, 1),
    (9, 2),
];

pub fn ansatz_circuit(p: &AnsatzParams) -> Circuit {
    let p = &p.0;
    let gates = vec![
        Gate::U3 { qubit: 0, theta: p[0], phi: p[1], lambda: p[2] },
        Gate::U3 { qubit: 1, theta: p[3], phi: p[4], lambda: p[5] },
        Gate::Cnot { control: 1, target: 0 },
        Gate::Rz { qubit: 0, theta: p[6] },
        Gate::Ry { qubit: 1, theta: p[7] },
        Gate::Cnot { control: 0, target: 1 },
        Gate::Ry { qubit: 1, theta: p[8] },
        Gate::Cnot { control: 1, target: 0 },
        Gate::U3 { qubit: 0, theta: p[9], phi: p[10], lambda: p[11] },
        Gate::U3 { qubit: 1, theta: p[12], phi: p[13], lambda: p[14] },
    ];
    Circuit::new(2, gates).expect("ansatz gates are valid")
}

/// Derivative of a gate's local matrix with respect to one of its angles.
fn gate_derivative(g: &Gate, slot: usize) -> ComplexMatrix {
    let minus_half_i = C64::new(0.0, -0.5);
    match (*g, slot) {
        (Gate::Ry { theta, .. }, 0) => &ComplexMatrix::pauli_y().scale(minus_half_i) * &ry(theta),
        (Gate::Rz { theta, .. }, 0) => &ComplexMatrix::pauli_z().scale(minus_half_i) * &rz(theta),
        (Gate::U3 { theta, phi, lambda, .. }, slot) => {
            let (s, c) = (0.5 * theta).sin_cos();
            let i = C64::new(0.0, 1.0);
            let e_l = C64::from_polar(1.0, lambda);
            let e_p = C64::from_polar(1.0, phi);
            let e_pl = C64::from_polar(1.0, phi + lambda);
            let z = C64::new(0.0, 0.0);
            let entries = match slot {
                0 => vec![(-0.5 * s).into(), -e_l * (0.5 * c), e_p * (0.5 * c), -e_pl * (0.5 * s)],
                1 => vec![z, z, i * e_p * s, i * e_pl * c],
                2 => vec![z, -i * e_l * s, z, i * e_pl * c],
                _ => unreachable!("U3 has three angles"),
            };
            ComplexMatrix::from_vec(2, entries).expect("2x2")
        }
        _ => unreachable!("no such angle slot"),
    }
}

/// Infidelity 1 − |tr(T†U)|²/16 and its gradient.
fn infidelity_and_gradient(target_adj: &ComplexMatrix, p: &AnsatzParams) -> (f64, [f64; ANSATZ_PARAMS]) {
    let circuit = ansatz_circuit(p);
    let gates = circuit.gates();
    let mats: Vec<ComplexMatrix> = gates.iter().map(|g| embed(g, 2)).collect();
    let n = mats.len();

    // prefix[k] = G_{k-1} … G_0, suffix[k] = G_{n-1} … G_{k+1}
    let mut prefix = Vec::with_capacity(n + 1);
    prefix.push(ComplexMatrix::identity(4));
    for m in &mats {
        let next = m * prefix.last().unwrap();
        prefix.push(next);
    }
    let mut suffix = vec![ComplexMatrix::identity(4); n];
    for k in (0..n - 1).rev() {
        suffix[k] = &suffix[k + 1] * &mats[k + 1];
    }

    let trace_with = |m: &ComplexMatrix| -> C64 {
        // tr(T† M)
        let mut t = C64::new(0.0, 0.0);
        for i in 0..4 {
            for j in 0..4 {
                t += target_adj[(i, j)] * m[(j, i)];
            }
        }
        t
    };

    let overlap = trace_with(&prefix[n]);
    let value = 1.0 - overlap.norm_sqr() / 16.0;

    let mut grad = [0.0; ANSATZ_PARAMS];
    for (k, &(gate, slot)) in GATE_OF_PARAM.iter().enumerate() {
        let g = &gates[gate];
        let local = gate_derivative(g, slot);
        let d = embed_single(&local, g.qubits()[0], 2);
        let du = &(&suffix[gate] * &d) * &prefix[gate];
        let dt = trace_with(&du);
        grad[k] = -2.0 * (overlap.conj() * dt).re / 16.0;
    }
    (value, grad)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitOptions {
    /// Accept once fidelity ≥ 1 − tol.
    pub tol: f64,
    pub restarts: usize,
    pub max_iterations: usize,
    pub seed: u64,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self { tol: 1e-8, restarts: 20, max_iterations: 5000, seed: 0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnsatzFit {
    pub params: AnsatzParams,
    pub fidelity: f64,
    /// Starts run, including the successful one.
    pub restarts_used: usize,
}

/// Fit the ansatz to `target` up to global phase.
///
/// Each start draws angles uniformly from [−π, π) on its own random stream
/// and runs BFGS on the infidelity to convergence. Starts run in order until
/// one reaches `1 − tol`, so the result depends only on `opts`.
pub fn fit_ansatz(target: &ComplexMatrix, opts: &FitOptions) -> Result<AnsatzFit> {
    if target.dim() != 4 {
        return Err(Error::DimensionMismatch { expected: 4, got: target.dim() });
    }
    let defect = target.unitarity_defect();
    if defect > UNITARY_TOL {
        return Err(Error::Domain(format!("target is not unitary (defect {defect:e})")));
    }
    let target_adj = target.adjoint();

    let mut best: Option<(AnsatzParams, f64)> = None;
    for r in 0..opts.restarts.max(1) {
        let mut rng = rng_for(opts.seed, r as u64);
        let start = AnsatzParams::random(&mut rng);
        let (params, _) = bfgs(&target_adj, start, opts.max_iterations);
        let fid = fidelity(target, &super::unitary_of(&ansatz_circuit(&params)))?;
        if best.is_none_or(|(_, f)| fid > f) {
            best = Some((params, fid));
        }
        if 1.0 - fid <= opts.tol {
            return Ok(AnsatzFit { params, fidelity: fid, restarts_used: r + 1 });
        }
    }
    let (_, fid) = best.expect("at least one restart");
    Err(Error::FitFailed { best_infidelity: 1.0 - fid, tol: opts.tol })
}

/// BFGS with an Armijo backtracking line search.
fn bfgs(target_adj: &ComplexMatrix, start: AnsatzParams, max_iterations: usize) -> (AnsatzParams, f64) {
    const N: usize = ANSATZ_PARAMS;
    let mut x = start;
    let (mut f, mut g) = infidelity_and_gradient(target_adj, &x);
    let mut h = [[0.0; N]; N];
    for (i, row) in h.iter_mut().enumerate() {
        row[i] = 1.0;
    }

    for _ in 0..max_iterations {
        let gnorm = g.iter().map(|v| v * v).sum::<f64>().sqrt();
        if f < 1e-15 || gnorm < 1e-13 {
            break;
        }
        let mut dir = [0.0; N];
        for i in 0..N {
            dir[i] = -(0..N).map(|j| h[i][j] * g[j]).sum::<f64>();
        }
        let mut slope: f64 = dir.iter().zip(&g).map(|(d, gi)| d * gi).sum();
        if slope >= 0.0 {
            // Lost descent: reset the inverse Hessian.
            for (i, row) in h.iter_mut().enumerate() {
                row.fill(0.0);
                row[i] = 1.0;
            }
            dir = g.map(|v| -v);
            slope = -gnorm * gnorm;
        }

        let mut step = 1.0;
        let mut accepted = None;
        while step > 1e-16 {
            let mut trial = x;
            for i in 0..N {
                trial.0[i] += step * dir[i];
            }
            let (ft, gt) = infidelity_and_gradient(target_adj, &trial);
            if ft <= f + 1e-4 * step * slope {
                accepted = Some((trial, ft, gt));
                break;
            }
            step *= 0.5;
        }
        let Some((xn, fnew, gn)) = accepted else { break };

        let s: Vec<f64> = (0..N).map(|i| xn.0[i] - x.0[i]).collect();
        let y: Vec<f64> = (0..N).map(|i| gn[i] - g[i]).collect();
        let sy: f64 = s.iter().zip(&y).map(|(a, b)| a * b).sum();
        if sy > 1e-300 {
            let hy: Vec<f64> = (0..N).map(|i| (0..N).map(|j| h[i][j] * y[j]).sum()).collect();
            let yhy: f64 = y.iter().zip(&hy).map(|(a, b)| a * b).sum();
            let rho = 1.0 / sy;
            for i in 0..N {
                for j in 0..N {
                    h[i][j] += rho * ((1.0 + rho * yhy) * s[i] * s[j] - hy[i] * s[j] - s[i] * hy[j]);
                }
            }
        }
        let progress = f - fnew;
        x = xn;
        f = fnew;
        g = gn;
        if progress.abs() < 1e-18 && f < 1e-10 {
            break;
        }
    }
    (x, f)
}
