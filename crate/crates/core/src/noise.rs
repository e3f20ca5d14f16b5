//! Density-matrix simulation of measurement circuits with depolarizing gate
//! noise and per-qubit readout confusion, plus shot sampling on top of the
//! exact outcome distributions.
//!
//! Each gate's depolarizing channel acts right after its unitary. Readout
//! error is a classical channel on the computational-basis distribution.

use rand::Rng;
use rand_distr::{Binomial, Distribution};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::circuit::{embed, measurement_unitary, Circuit, Gate};
use crate::collective::helstrom_povm;
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, HermitianOperator};
use crate::state::{DensityMatrix, DiscriminationProblem, Hypothesis};
use crate::stats::{rng_for, ErrorEstimate};

/// Tolerance on outcome distributions summing to one.
pub const DISTRIBUTION_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    /// Depolarizing probability after each single-qubit gate.
    pub p1: f64,
    /// Two-qubit depolarizing probability after each CNOT.
    pub p2: f64,
    /// P(read 1 | true 0).
    pub r0: f64,
    /// P(read 0 | true 1).
    pub r1: f64,
    /// Multiplies all four rates.
    pub scale: f64,
}

impl Default for NoiseModel {
    fn default() -> Self {
        Self { p1: 1e-3, p2: 1e-2, r0: 1e-2, r1: 2e-2, scale: 1.0 }
    }
}

impl NoiseModel {
    pub fn new(p1: f64, p2: f64, r0: f64, r1: f64, scale: f64) -> Result<Self> {
        let m = Self { p1, p2, r0, r1, scale };
        m.validate()?;
        Ok(m)
    }

    /// No gate or readout error.
    pub fn noiseless() -> Self {
        Self { p1: 0.0, p2: 0.0, r0: 0.0, r1: 0.0, scale: 0.0 }
    }

    pub fn with_scale(self, scale: f64) -> Result<Self> {
        Self::new(self.p1, self.p2, self.r0, self.r1, scale)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.scale.is_finite() && self.scale >= 0.0) {
            return Err(Error::Domain(format!("noise scale must be >= 0, got {}", self.scale)));
        }
        for (name, base) in [("p1", self.p1), ("p2", self.p2), ("r0", self.r0), ("r1", self.r1)] {
            if !(0.0..=1.0).contains(&base) {
                return Err(Error::Domain(format!("{name} must lie in [0, 1], got {base}")));
            }
            let eff = self.scale * base;
            if eff > 1.0 {
                return Err(Error::Domain(format!("scale × {name} = {eff} exceeds 1")));
            }
        }
        Ok(())
    }

    pub fn eff_p1(&self) -> f64 {
        self.scale * self.p1
    }

    pub fn eff_p2(&self) -> f64 {
        self.scale * self.p2
    }

    pub fn eff_r0(&self) -> f64 {
        self.scale * self.r0
    }

    pub fn eff_r1(&self) -> f64 {
        self.scale * self.r1
    }
}

/// Probabilities over the 2^n computational outcomes, qubit 0 most
/// significant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutcomeDistribution {
    probs: Vec<f64>,
}

impl OutcomeDistribution {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() || !probs.len().is_power_of_two() {
            return Err(Error::Domain(format!("{} outcomes is not a power of two", probs.len())));
        }
        if let Some(p) = probs.iter().find(|p| !(p.is_finite() && **p >= -DISTRIBUTION_TOL)) {
            return Err(Error::Domain(format!("invalid outcome probability {p}")));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > DISTRIBUTION_TOL {
            return Err(Error::Domain(format!("outcome probabilities sum to {total}")));
        }
        Ok(Self { probs: probs.into_iter().map(|p| p.max(0.0)).collect() })
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn qubits(&self) -> usize {
        self.probs.len().trailing_zeros() as usize
    }

    /// Total probability of outcomes whose decision is `h`.
    pub fn mass_on(&self, decisions: &[Hypothesis], h: Hypothesis) -> f64 {
        self.probs.iter().zip(decisions).filter(|(_, d)| **d == h).map(|(p, _)| p).sum()
    }
}

/// (1−p)ρ + p·(I/2^k ⊗ tr_S ρ) on the qubit set S, |S| = k ∈ {1, 2}.
pub fn depolarize(rho: &DensityMatrix, qubits: &[usize], p: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Domain(format!("depolarizing probability {p} outside [0, 1]")));
    }
    let n = rho.qubits().ok_or_else(|| Error::InvalidState("dimension is not a power of two".into()))?;
    if qubits.is_empty() || qubits.len() > 2 {
        return Err(Error::Domain(format!("depolarize acts on 1 or 2 qubits, got {}", qubits.len())));
    }
    if let Some(&q) = qubits.iter().find(|&&q| q >= n) {
        return Err(Error::Domain(format!("qubit {q} out of range for {n} qubits")));
    }
    if qubits.len() == 2 && qubits[0] == qubits[1] {
        return Err(Error::Domain(format!("repeated qubit {}", qubits[0])));
    }
    if p == 0.0 {
        return Ok(rho.clone());
    }

    let dim = rho.dim();
    let mask: usize = qubits.iter().map(|&q| 1usize << (n - 1 - q)).sum();
    // All bit patterns on the acted qubits.
    let subs: Vec<usize> = (0..dim).filter(|s| s & !mask == 0).collect();
    let weight = p / subs.len() as f64;

    let m = rho.matrix();
    let out = ComplexMatrix::from_fn(dim, |i, j| {
        let mut x = m[(i, j)] * (1.0 - p);
        if i & mask == j & mask {
            let (ri, rj) = (i & !mask, j & !mask);
            let partial: num_complex::Complex64 = subs.iter().map(|s| m[(ri | s, rj | s)]).sum();
            x += partial * weight;
        }
        x
    });
    Ok(DensityMatrix::new_unchecked(HermitianOperator::symmetrized(out)))
}

fn check_width(c: &Circuit, rho: &DensityMatrix) -> Result<()> {
    let width = 1usize << c.width();
    if rho.dim() != width {
        return Err(Error::DimensionMismatch { expected: width, got: rho.dim() });
    }
    Ok(())
}

/// Each gate's unitary followed by its depolarizing channel.
pub fn apply_circuit_noisy(c: &Circuit, rho_in: &DensityMatrix, noise: &NoiseModel) -> Result<DensityMatrix> {
    noise.validate()?;
    check_width(c, rho_in)?;
    let mut rho = rho_in.clone();
    for g in c.gates() {
        let u = embed(g, c.width());
        rho = DensityMatrix::new_unchecked(rho.operator().conjugate_by(&u));
        let p = match g {
            Gate::Cnot { .. } => noise.eff_p2(),
            _ => noise.eff_p1(),
        };
        rho = depolarize(&rho, &g.qubits(), p)?;
    }
    Ok(rho)
}

/// Computational-basis populations passed through independent per-qubit
/// asymmetric bit flips.
pub fn readout_distribution(rho: &DensityMatrix, noise: &NoiseModel) -> Result<OutcomeDistribution> {
    noise.validate()?;
    let n = rho.qubits().ok_or_else(|| Error::InvalidState("dimension is not a power of two".into()))?;
    let mut probs: Vec<f64> = rho.diagonal().into_iter().map(|p| p.max(0.0)).collect();
    let (r0, r1) = (noise.eff_r0(), noise.eff_r1());
    if r0 > 0.0 || r1 > 0.0 {
        for q in 0..n {
            let bit = 1usize << (n - 1 - q);
            for i in (0..probs.len()).filter(|i| i & bit == 0) {
                let (p0, p1) = (probs[i], probs[i | bit]);
                probs[i] = (1.0 - r0) * p0 + r1 * p1;
                probs[i | bit] = r0 * p0 + (1.0 - r1) * p1;
            }
        }
    }
    let total: f64 = probs.iter().sum();
    OutcomeDistribution::new(probs.into_iter().map(|p| p / total).collect())
}

/// Noisy outcome distribution for each hypothesis, in (ρ₊, ρ₋) order.
fn hypothesis_distributions(
    problem: &DiscriminationProblem,
    circuit: &Circuit,
    decisions: &[Hypothesis],
    noise: &NoiseModel,
) -> Result<[OutcomeDistribution; 2]> {
    problem.validate()?;
    if circuit.width() != problem.copies {
        return Err(Error::DimensionMismatch { expected: problem.copies, got: circuit.width() });
    }
    check_decisions(decisions, problem.copies)?;
    let run = |h| -> Result<OutcomeDistribution> {
        let rho = apply_circuit_noisy(circuit, &problem.copies_state(h)?, noise)?;
        readout_distribution(&rho, noise)
    };
    Ok([run(Hypothesis::Plus)?, run(Hypothesis::Minus)?])
}

fn check_decisions(decisions: &[Hypothesis], qubits: usize) -> Result<()> {
    if decisions.len() != 1 << qubits {
        return Err(Error::DimensionMismatch { expected: 1 << qubits, got: decisions.len() });
    }
    Ok(())
}

fn error_from_distributions(q: f64, dists: &[OutcomeDistribution; 2], decisions: &[Hypothesis]) -> f64 {
    q * dists[0].mass_on(decisions, Hypothesis::Minus) + (1.0 - q) * dists[1].mass_on(decisions, Hypothesis::Plus)
}

/// q·P(guess ρ₋ | ρ₊^{⊗M}) + (1−q)·P(guess ρ₊ | ρ₋^{⊗M}) through the noisy
/// circuit and readout, without sampling.
pub fn exact_error_probability(
    problem: &DiscriminationProblem,
    circuit: &Circuit,
    decisions: &[Hypothesis],
    noise: &NoiseModel,
) -> Result<f64> {
    let dists = hypothesis_distributions(problem, circuit, decisions, noise)?;
    Ok(error_from_distributions(problem.q, &dists, decisions))
}

/// Multinomial counts, drawn as a chain of conditional binomials.
pub fn sample_shots(dist: &OutcomeDistribution, shots: u64, seed: u64) -> Result<Vec<u64>> {
    if shots == 0 {
        return Err(Error::Domain("shots must be >= 1".into()));
    }
    Ok(multinomial(dist.probabilities(), shots, &mut rng_for(seed, 0)))
}

fn multinomial<R: Rng>(probs: &[f64], shots: u64, rng: &mut R) -> Vec<u64> {
    let mut counts = vec![0; probs.len()];
    let mut left = shots;
    let mut mass = 1.0;
    for (k, &p) in probs.iter().enumerate() {
        if left == 0 {
            break;
        }
        if k + 1 == probs.len() || mass <= p {
            counts[k] = left;
            break;
        }
        let frac = (p / mass).clamp(0.0, 1.0);
        let draw = Binomial::new(left, frac).expect("valid binomial").sample(rng);
        counts[k] = draw;
        left -= draw;
        mass -= p;
    }
    counts
}

/// Samples `shots` rounds: the true hypothesis by prior q, then an outcome
/// from that hypothesis' noisy distribution. Errors are counted against the
/// decision map.
fn sample_errors(
    q: f64,
    dists: &[OutcomeDistribution; 2],
    decisions: &[Hypothesis],
    shots: u64,
    seed: u64,
    resamples: usize,
) -> Result<ErrorEstimate> {
    if shots == 0 {
        return Err(Error::Domain("shots must be >= 1".into()));
    }
    let n_plus = Binomial::new(shots, q).map_err(|e| Error::Domain(e.to_string()))?.sample(&mut rng_for(seed, 0));
    let mut errors = 0;
    for (k, (dist, n, wrong)) in
        [(&dists[0], n_plus, Hypothesis::Minus), (&dists[1], shots - n_plus, Hypothesis::Plus)].into_iter().enumerate()
    {
        let counts = multinomial(dist.probabilities(), n, &mut rng_for(seed, k as u64 + 1));
        errors += counts.iter().zip(decisions).filter(|(_, d)| **d == wrong).map(|(c, _)| c).sum::<u64>();
    }
    ErrorEstimate::from_counts(errors, shots, seed, resamples)
}

/// Monte-Carlo error rate with a bootstrap standard deviation.
pub fn estimate_error(
    problem: &DiscriminationProblem,
    circuit: &Circuit,
    decisions: &[Hypothesis],
    noise: &NoiseModel,
    shots: u64,
    seed: u64,
    resamples: usize,
) -> Result<ErrorEstimate> {
    let dists = hypothesis_distributions(problem, circuit, decisions, noise)?;
    sample_errors(problem.q, &dists, decisions, shots, seed, resamples)
}

/// Seed for the `index`-th task under a master seed.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    rng_for(seed, index).gen()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub scale: f64,
    pub exact: f64,
    pub estimate: ErrorEstimate,
}

/// One exact and one sampled error per noise scale. Scale `k` samples under
/// `derive_seed(seed, k)`, so results do not depend on scheduling.
#[allow(clippy::too_many_arguments)]
pub fn noise_sweep(
    problem: &DiscriminationProblem,
    circuit: &Circuit,
    decisions: &[Hypothesis],
    base: &NoiseModel,
    scales: &[f64],
    shots: u64,
    seed: u64,
    resamples: usize,
) -> Result<Vec<SweepPoint>> {
    let models = scales.iter().map(|&s| base.with_scale(s)).collect::<Result<Vec<_>>>()?;
    models
        .par_iter()
        .enumerate()
        .map(|(k, noise)| {
            let dists = hypothesis_distributions(problem, circuit, decisions, noise)?;
            let exact = error_from_distributions(problem.q, &dists, decisions);
            let estimate = sample_errors(problem.q, &dists, decisions, shots, derive_seed(seed, k as u64), resamples)?;
            Ok(SweepPoint { scale: noise.scale, exact, estimate })
        })
        .collect()
}

/// Stand-in gate budget for a measurement that is not compiled to gates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GateCounts {
    pub single: usize,
    pub two: usize,
}

impl GateCounts {
    /// 20 CNOT-equivalents for three copies, 100 for four, with twice as
    /// many single-qubit gates.
    pub fn default_for(copies: usize) -> Result<Self> {
        match copies {
            3 => Ok(Self { single: 40, two: 20 }),
            4 => Ok(Self { single: 200, two: 100 }),
            m => Err(Error::Domain(format!("no default gate budget for {m} copies"))),
        }
    }
}

/// Outcome of the noisy Γ-eigenbasis measurement.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MultiCopyResult {
    pub exact: f64,
    pub estimate: ErrorEstimate,
}

/// Projective measurement in the eigenbasis of Γ for three or four copies,
/// applied as one ideal basis rotation. Noise enters as `gates.two`
/// two-qubit depolarizing events on neighbouring pairs (0,1), (1,2), …
/// cyclically, then `gates.single` single-qubit events on qubits 0, 1, …
/// cyclically, then readout confusion.
pub fn multi_copy_measurement_sim(
    problem: &DiscriminationProblem,
    noise: &NoiseModel,
    gates: GateCounts,
    shots: u64,
    seed: u64,
    resamples: usize,
) -> Result<MultiCopyResult> {
    problem.validate()?;
    noise.validate()?;
    let m = problem.copies;
    if !(3..=4).contains(&m) {
        return Err(Error::Domain(format!("multi-copy simulation supports 3 or 4 copies, got {m}")));
    }
    let basis = measurement_unitary(&helstrom_povm(problem)?.povm)?;
    let run = |h| -> Result<OutcomeDistribution> {
        let mut rho = DensityMatrix::new_unchecked(problem.copies_state(h)?.operator().conjugate_by(&basis.unitary));
        for k in 0..gates.two {
            let a = k % m;
            rho = depolarize(&rho, &[a, (a + 1) % m], noise.eff_p2())?;
        }
        for k in 0..gates.single {
            rho = depolarize(&rho, &[k % m], noise.eff_p1())?;
        }
        readout_distribution(&rho, noise)
    };
    let dists = [run(Hypothesis::Plus)?, run(Hypothesis::Minus)?];
    let exact = error_from_distributions(problem.q, &dists, &basis.decisions);
    let estimate = sample_errors(problem.q, &dists, &basis.decisions, shots, seed, resamples)?;
    Ok(MultiCopyResult { exact, estimate })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::collective::helstrom_error;
    use crate::stats::DEFAULT_BOOTSTRAP_RESAMPLES;
    use std::f64::consts::FRAC_PI_4;

    fn close(a: &ComplexMatrix, b: &ComplexMatrix, tol: f64) -> bool {
        a.max_abs_diff(b) < tol
    }

    fn random_state(n: usize, seed: u64) -> DensityMatrix {
        let dim = 1 << n;
        let mut rng = rng_for(seed, 0);
        let a = ComplexMatrix::from_fn(dim, |_, _| {
            num_complex::Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        });
        let m = &a * &a.adjoint();
        let tr = m.trace().re;
        DensityMatrix::new(HermitianOperator::new(m.scale_real(1.0 / tr)).unwrap()).unwrap()
    }

    #[test]
    fn depolarize_limits() {
        let rho = random_state(2, 1);
        assert_eq!(depolarize(&rho, &[0], 0.0).unwrap(), rho);
        let full = depolarize(&rho, &[0, 1], 1.0).unwrap();
        assert!(close(full.matrix(), DensityMatrix::maximally_mixed(4).matrix(), 1e-15));
    }

    #[test]
    fn single_qubit_full_depolarization_keeps_the_other_marginal() {
        let a = random_state(1, 2);
        let b = random_state(1, 3);
        let out = depolarize(&a.kron(&b), &[0], 1.0).unwrap();
        let want = DensityMatrix::maximally_mixed(2).kron(&b);
        assert!(close(out.matrix(), want.matrix(), 1e-15));
        let out = depolarize(&a.kron(&b), &[1], 1.0).unwrap();
        let want = a.kron(&DensityMatrix::maximally_mixed(2));
        assert!(close(out.matrix(), want.matrix(), 1e-15));
    }

    #[test]
    fn depolarize_rejects_bad_arguments() {
        let rho = random_state(2, 4);
        assert!(depolarize(&rho, &[2], 0.1).is_err());
        assert!(depolarize(&rho, &[0, 0], 0.1).is_err());
        assert!(depolarize(&rho, &[], 0.1).is_err());
        assert!(depolarize(&rho, &[0], 1.5).is_err());
    }

    #[test]
    fn readout_example() {
        let noise = NoiseModel::new(0.0, 0.0, 0.01, 0.02, 1.0).unwrap();
        let d = readout_distribution(&DensityMatrix::basis(4, 0), &noise).unwrap();
        let want = [0.9801, 0.0099, 0.0099, 0.0001];
        for (p, w) in d.probabilities().iter().zip(want) {
            assert!((p - w).abs() < 1e-15);
        }
        let flip = NoiseModel::new(0.0, 0.0, 1.0, 0.0, 1.0).unwrap();
        let d = readout_distribution(&DensityMatrix::basis(2, 0), &flip).unwrap();
        assert_eq!(d.probabilities(), &[0.0, 1.0]);
    }

    #[test]
    fn noise_model_validation() {
        assert!(NoiseModel::default().validate().is_ok());
        assert!(NoiseModel::default().with_scale(-1.0).is_err());
        assert!(NoiseModel::default().with_scale(60.0).is_err());
        assert!(NoiseModel::default().with_scale(50.0).is_ok());
        assert!(NoiseModel::new(1.2, 0.0, 0.0, 0.0, 0.5).is_err());
    }

    #[test]
    fn ry_with_full_depolarization_gives_mixed_qubit() {
        let noise = NoiseModel::new(1.0, 0.0, 0.0, 0.0, 1.0).unwrap();
        for theta in [0.0, 0.4, 2.0] {
            let c = Circuit::new(1, vec![Gate::Ry { qubit: 0, theta }]).unwrap();
            let out = apply_circuit_noisy(&c, &DensityMatrix::basis(2, 0), &noise).unwrap();
            assert!(close(out.matrix(), DensityMatrix::maximally_mixed(2).matrix(), 1e-15));
        }
    }

    #[test]
    fn multinomial_point_mass_and_determinism() {
        let d = OutcomeDistribution::new(vec![1.0, 0.0, 0.0, 0.0]).unwrap();
        assert_eq!(sample_shots(&d, 1000, 3).unwrap(), vec![1000, 0, 0, 0]);
        let u = OutcomeDistribution::new(vec![0.25; 4]).unwrap();
        assert_eq!(sample_shots(&u, 5000, 9).unwrap(), sample_shots(&u, 5000, 9).unwrap());
        assert_eq!(sample_shots(&u, 5000, 9).unwrap().iter().sum::<u64>(), 5000);
    }

    #[test]
    fn identity_circuit_guessing_plus_errs_with_one_minus_q() {
        let p = DiscriminationProblem::new(FRAC_PI_4, 0.1, 0.3, 2).unwrap();
        let dec = vec![Hypothesis::Plus; 4];
        let e = exact_error_probability(&p, &Circuit::empty(2), &dec, &NoiseModel::default()).unwrap();
        assert!((e - 0.7).abs() < 1e-12);
    }

    #[test]
    fn noiseless_multi_copy_saturates_helstrom() {
        for m in [3, 4] {
            let p = DiscriminationProblem::new(FRAC_PI_4, 0.1, 0.75, m).unwrap();
            let r = multi_copy_measurement_sim(
                &p,
                &NoiseModel::default().with_scale(0.0).unwrap(),
                GateCounts::default_for(m).unwrap(),
                1000,
                1,
                DEFAULT_BOOTSTRAP_RESAMPLES,
            )
            .unwrap();
            assert!((r.exact - helstrom_error(&p).unwrap()).abs() < 1e-10, "M={m}");
        }
        let p = DiscriminationProblem::new(FRAC_PI_4, 0.1, 0.75, 2).unwrap();
        let gates = GateCounts { single: 0, two: 0 };
        assert!(multi_copy_measurement_sim(&p, &NoiseModel::noiseless(), gates, 10, 0, 100).is_err());
    }
}
