mod common;

use common::{haar_unitary, makhlin, random_problem};
use qsd_core::circuit::{
    ansatz_circuit, fidelity, fit_ansatz, gate_unitary, measurement_unitary, parse_circuit, unitary_of, write_circuit,
    AnsatzParams, FitOptions, Gate,
};
use qsd_core::noise::{exact_error_probability, NoiseModel};
use qsd_core::stats::rng_for;
use qsd_core::{helstrom_error, helstrom_povm, DiscriminationProblem};
use std::f64::consts::FRAC_PI_4;

#[test]
fn ansatz_unitaries_are_unitary() {
    let mut rng = rng_for(31, 0);
    for _ in 0..1000 {
        let u = unitary_of(&ansatz_circuit(&AnsatzParams::random(&mut rng)));
        assert!(u.unitarity_defect() < 1e-10);
    }
}

#[test]
fn fidelity_symmetry_and_common_unitary_invariance() {
    let mut rng = rng_for(32, 0);
    for _ in 0..50 {
        let (u, v, w) = (haar_unitary(4, &mut rng), haar_unitary(4, &mut rng), haar_unitary(4, &mut rng));
        let f = fidelity(&u, &v).unwrap();
        assert!((f - fidelity(&v, &u).unwrap()).abs() < 1e-12);
        assert!((f - fidelity(&(&w * &u), &(&w * &v)).unwrap()).abs() < 1e-12);
        assert!((f - fidelity(&(&u * &w), &(&v * &w)).unwrap()).abs() < 1e-12);
    }
}

#[test]
fn realizable_targets_round_trip() {
    let opts = FitOptions { tol: 1e-9, ..FitOptions::default() };
    let mut rng = rng_for(33, 0);
    for k in 0..50 {
        let target = unitary_of(&ansatz_circuit(&AnsatzParams::random(&mut rng)));
        let fit = fit_ansatz(&target, &FitOptions { seed: k, ..opts }).unwrap();
        assert!(fit.fidelity >= 1.0 - 1e-9, "target {k}: {}", fit.fidelity);
    }
}

#[test]
fn haar_random_targets_are_reachable() {
    let opts = FitOptions { tol: 1e-6, restarts: 20, ..FitOptions::default() };
    let mut rng = rng_for(34, 0);
    for k in 0..30 {
        let target = haar_unitary(4, &mut rng);
        let fit = fit_ansatz(&target, &opts).unwrap_or_else(|e| panic!("target {k}: {e}"));
        assert!(fit.fidelity >= 1.0 - 1e-6);
        assert!(fit.restarts_used <= 20);
    }
}

#[test]
fn interaction_block_alone_realizes_cnot_class() {
    let cnot = gate_unitary(&Gate::Cnot { control: 0, target: 1 });
    let (g1, g2) = makhlin(&cnot);
    assert!(g1.norm() < 1e-12 && (g2 - 1.0).abs() < 1e-12);

    let fit = fit_ansatz(&cnot, &FitOptions::default()).unwrap();
    // Strip the outer single-qubit layers: U3(0, 0, 0) = I.
    let mut core = fit.params;
    for k in (0..6).chain(9..15) {
        core.0[k] = 0.0;
    }
    let (h1, h2) = makhlin(&unitary_of(&ansatz_circuit(&core)));
    assert!((h1 - g1).norm() < 1e-7, "G1 = {h1}");
    assert!((h2 - g2).abs() < 1e-7, "G2 = {h2}");
}

#[test]
fn fitted_helstrom_circuits_reach_the_bound() {
    let mut rng = rng_for(35, 0);
    let mut problems = vec![DiscriminationProblem::new(FRAC_PI_4, 0.1, 0.75, 2).unwrap()];
    problems.extend((0..10).map(|_| random_problem(2, &mut rng)));
    for p in problems {
        let basis = measurement_unitary(&helstrom_povm(&p).unwrap().povm).unwrap();
        let fit = fit_ansatz(&basis.unitary, &FitOptions::default()).unwrap();
        assert!(fit.fidelity >= 1.0 - 1e-8);
        let circuit = ansatz_circuit(&fit.params);
        assert_eq!(circuit.cnot_count(), 3);
        let err = exact_error_probability(&p, &circuit, &basis.decisions, &NoiseModel::noiseless()).unwrap();
        assert!((err - helstrom_error(&p).unwrap()).abs() < 1e-6, "{p:?}");

        let reparsed = parse_circuit(&write_circuit(&circuit)).unwrap();
        assert_eq!(unitary_of(&reparsed), unitary_of(&circuit));
    }
}
