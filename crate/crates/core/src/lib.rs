//! Minimum-error discrimination of multiple copies of two mixed qubit states.
//!
//! * [`collective`]: Helstrom bound and the sign-of-Γ measurement.
//! * [`locc`]: optimal adaptive single-copy measurements by backward
//!   induction, plus an exhaustive two-copy cross-check.
//! * [`circuit`]: gates, the 3-CNOT two-qubit ansatz, and fitting it to a
//!   measurement unitary.
//! * [`noise`]: density-matrix simulation with depolarizing gates and
//!   readout confusion.

pub mod circuit;
pub mod collective;
pub mod error;
pub mod linalg;
pub mod locc;
pub mod noise;
pub mod optimize;
pub mod state;
pub mod stats;

pub use collective::{
    error_probability, gamma, helstrom_error, helstrom_povm, single_copy_closed_form, HelstromSolution, Povm,
};
pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, Eigen, HermitianOperator};
pub use locc::{dp_solve, gap, GapResult, PolicyTable};
pub use noise::{
    apply_circuit_noisy, depolarize, estimate_error, exact_error_probability, multi_copy_measurement_sim, noise_sweep,
    readout_distribution, sample_shots, GateCounts, MultiCopyResult, NoiseModel, OutcomeDistribution, SweepPoint,
};
pub use state::{make_state, tensor_power, DensityMatrix, DiscriminationProblem, Hypothesis};
pub use stats::ErrorEstimate;
