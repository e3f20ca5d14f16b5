mod common;

use common::random_problem;
use qsd_core::collective::POVM_TOL;
use qsd_core::stats::rng_for;
use qsd_core::{
    error_probability, gamma, helstrom_error, helstrom_povm, single_copy_closed_form, ComplexMatrix,
    DiscriminationProblem, HermitianOperator,
};

fn grid(n: usize, lo: f64, hi: f64) -> impl Iterator<Item = f64> + Clone {
    (0..n).map(move |k| lo + (hi - lo) * k as f64 / (n - 1) as f64)
}

#[test]
fn helstrom_is_nonincreasing_in_copies() {
    for alpha in grid(5, 0.1, std::f64::consts::FRAC_PI_2) {
        for v in grid(5, 0.0, 0.9) {
            for q in grid(7, 0.05, 0.95) {
                let errs: Vec<f64> = (1..=4)
                    .map(|m| helstrom_error(&DiscriminationProblem::new(alpha, v, q, m).unwrap()).unwrap())
                    .collect();
                for w in errs.windows(2) {
                    assert!(w[1] <= w[0] + 1e-12, "α={alpha} v={v} q={q}: {errs:?}");
                }
                assert!(errs[0] <= q.min(1.0 - q) + 1e-15);
            }
        }
    }
}

#[test]
fn label_swap_symmetry() {
    // ρ₋ = σ₃ ρ₊ σ₃, so swapping the labels is the same as q → 1−q.
    let mut rng = rng_for(11, 0);
    for m in 1..=3 {
        for _ in 0..10 {
            let p = random_problem(m, &mut rng);
            let a = helstrom_error(&p).unwrap();
            let b = helstrom_error(&p.with_q(1.0 - p.q)).unwrap();
            assert!((a - b).abs() < 1e-12, "{p:?}");
        }
    }
}

#[test]
fn povm_attains_bound_and_is_complete() {
    let mut rng = rng_for(12, 0);
    for m in 1..=4 {
        for _ in 0..8 {
            let p = random_problem(m, &mut rng);
            let sol = helstrom_povm(&p).unwrap();
            let err = error_probability(&sol.povm, &p).unwrap();
            assert!((err - helstrom_error(&p).unwrap()).abs() < 1e-10, "{p:?}");
            assert!((sol.error_probability - 0.5 * (1.0 - sol.gamma.trace_norm().unwrap())).abs() < 1e-12);

            let sum =
                sol.povm.elements().iter().fold(HermitianOperator::zeros(1 << m), |acc, e| acc.combine(1.0, e, 1.0));
            assert!(sum.matrix().max_abs_diff(&ComplexMatrix::identity(1 << m)) <= POVM_TOL);
            for e in sol.povm.elements() {
                assert!(e.eigenvalues().unwrap()[0] >= -POVM_TOL);
            }
            assert!((gamma(&p).unwrap().trace() - (2.0 * p.q - 1.0)).abs() < 1e-12);
        }
    }
}

#[test]
fn closed_form_matches_on_coarse_grid() {
    for alpha in grid(30, 0.01, std::f64::consts::FRAC_PI_2) {
        for v in grid(30, 0.0, 1.0) {
            for q in grid(30, 0.0, 1.0) {
                let p = DiscriminationProblem::new(alpha, v, q, 1).unwrap();
                let d = (helstrom_error(&p).unwrap() - single_copy_closed_form(alpha, v, q)).abs();
                assert!(d < 1e-12, "α={alpha} v={v} q={q}: {d:e}");
            }
        }
    }
}

#[test]
fn identical_states_cannot_beat_guessing() {
    for m in 1..=4 {
        for q in [0.0, 0.2, 0.5, 0.9] {
            let p = DiscriminationProblem::new(0.7, 1.0, q, m).unwrap();
            assert!((helstrom_error(&p).unwrap() - q.min(1.0 - q)).abs() < 1e-12);
        }
    }
}
