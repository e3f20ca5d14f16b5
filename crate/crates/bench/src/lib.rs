//! Benchmark fixtures shared by the criterion targets.

use qsd_core::DiscriminationProblem;

/// α = π/4, v = 0.1, q = 0.75 with `copies` copies.
pub fn reference_problem(copies: usize) -> DiscriminationProblem {
    DiscriminationProblem::new(std::f64::consts::FRAC_PI_4, 0.1, 0.75, copies).expect("valid problem")
}
