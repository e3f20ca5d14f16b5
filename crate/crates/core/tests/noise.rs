mod common;

use common::random_density;
use proptest::prelude::*;
use qsd_core::circuit::{ansatz_circuit, fit_ansatz, measurement_unitary, AnsatzParams, Circuit, FitOptions};
use qsd_core::noise::{
    apply_circuit_noisy, depolarize, estimate_error, exact_error_probability, multi_copy_measurement_sim, noise_sweep,
    readout_distribution, GateCounts, NoiseModel,
};
use qsd_core::stats::{rng_for, DEFAULT_BOOTSTRAP_RESAMPLES};
use qsd_core::{helstrom_error, helstrom_povm, DiscriminationProblem, Hypothesis};
use std::f64::consts::FRAC_PI_4;

fn fitted(p: &DiscriminationProblem) -> (Circuit, Vec<Hypothesis>) {
    let basis = measurement_unitary(&helstrom_povm(p).unwrap().povm).unwrap();
    let fit = fit_ansatz(&basis.unitary, &FitOptions::default()).unwrap();
    (ansatz_circuit(&fit.params), basis.decisions)
}

fn reference_problem() -> DiscriminationProblem {
    DiscriminationProblem::new(FRAC_PI_4, 0.1, 0.75, 2).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn channels_preserve_trace_and_positivity(seed in any::<u64>(), p in 0.0..=1.0f64, two in any::<bool>()) {
        let mut rng = rng_for(seed, 0);
        let rho = random_density(8, &mut rng);
        let qubits: &[usize] = if two { &[2, 0] } else { &[1] };
        let out = depolarize(&rho, qubits, p).unwrap();
        prop_assert!((out.operator().trace() - 1.0).abs() < 1e-10);
        prop_assert!(out.operator().eigenvalues().unwrap()[0] >= -1e-10);

        let circuit = ansatz_circuit(&AnsatzParams::random(&mut rng));
        let noise = NoiseModel::default().with_scale(p * 50.0).unwrap();
        let out = apply_circuit_noisy(&circuit, &random_density(4, &mut rng), &noise).unwrap();
        prop_assert!((out.operator().trace() - 1.0).abs() < 1e-10);
        prop_assert!(out.operator().eigenvalues().unwrap()[0] >= -1e-10);

        let dist = readout_distribution(&out, &noise).unwrap();
        prop_assert!((dist.probabilities().iter().sum::<f64>() - 1.0).abs() < 1e-12);
        prop_assert!(dist.probabilities().iter().all(|&x| x >= 0.0));
    }
}

#[test]
fn zero_scale_circuit_is_the_bare_unitary() {
    let mut rng = rng_for(41, 0);
    let circuit = ansatz_circuit(&AnsatzParams::random(&mut rng));
    let rho = random_density(4, &mut rng);
    let out = apply_circuit_noisy(&circuit, &rho, &NoiseModel::default().with_scale(0.0).unwrap()).unwrap();
    let u = qsd_core::circuit::unitary_of(&circuit);
    let want = rho.matrix().conjugate_by(&u);
    assert!(out.matrix().max_abs_diff(&want) < 1e-14);
    let same = apply_circuit_noisy(&Circuit::empty(2), &rho, &NoiseModel::default()).unwrap();
    assert_eq!(&same, &rho);
}

#[test]
fn noiseless_fitted_circuit_saturates_helstrom() {
    let mut rng = rng_for(42, 0);
    for _ in 0..10 {
        let p = common::random_problem(2, &mut rng);
        let (c, dec) = fitted(&p);
        let e = exact_error_probability(&p, &c, &dec, &NoiseModel::default().with_scale(0.0).unwrap()).unwrap();
        assert!((e - helstrom_error(&p).unwrap()).abs() < 1e-6, "{p:?}");
    }
}

#[test]
fn uninformative_states_never_beat_guessing() {
    let mut rng = rng_for(43, 0);
    for q in [0.1, 0.5, 0.75] {
        let p = DiscriminationProblem::new(0.8, 1.0, q, 2).unwrap();
        for _ in 0..5 {
            let c = ansatz_circuit(&AnsatzParams::random(&mut rng));
            let dec: Vec<Hypothesis> =
                (0..4).map(|_| if rand::Rng::gen(&mut rng) { Hypothesis::Plus } else { Hypothesis::Minus }).collect();
            let e = exact_error_probability(&p, &c, &dec, &NoiseModel::default()).unwrap();
            assert!(e >= q.min(1.0 - q) - 1e-10);
        }
    }
}

#[test]
fn sampler_agrees_with_exact_distribution() {
    let p = reference_problem();
    let (c, dec) = fitted(&p);
    let noise = NoiseModel::default();
    let exact = exact_error_probability(&p, &c, &dec, &noise).unwrap();
    let hits = (0..20)
        .filter(|&s| {
            estimate_error(&p, &c, &dec, &noise, 200_000, s, DEFAULT_BOOTSTRAP_RESAMPLES).unwrap().within(exact, 4.0)
        })
        .count();
    assert!(hits >= 19, "{hits}/20 within 4σ");

    let q1 = p.with_q(1.0);
    let all_plus = vec![Hypothesis::Plus; 4];
    let e = estimate_error(&q1, &c, &all_plus, &noise, 10_000, 1, 100).unwrap();
    assert_eq!(e.p_err, 0.0);
}

#[test]
fn seeded_runs_are_bit_identical() {
    let p = reference_problem();
    let (c, dec) = fitted(&p);
    let noise = NoiseModel::default();
    let a = estimate_error(&p, &c, &dec, &noise, 50_000, 9, 200).unwrap();
    let b = estimate_error(&p, &c, &dec, &noise, 50_000, 9, 200).unwrap();
    assert_eq!(a, b);
    let scales = [0.0, 0.5, 1.0];
    let s1 = noise_sweep(&p, &c, &dec, &noise, &scales, 20_000, 3, 100).unwrap();
    let s2 = noise_sweep(&p, &c, &dec, &noise, &scales, 20_000, 3, 100).unwrap();
    assert_eq!(s1, s2);
    let gates = GateCounts::default_for(3).unwrap();
    let m1 = multi_copy_measurement_sim(&p.with_copies(3), &noise, gates, 20_000, 4, 100).unwrap();
    let m2 = multi_copy_measurement_sim(&p.with_copies(3), &noise, gates, 20_000, 4, 100).unwrap();
    assert_eq!(m1, m2);
}

#[test]
fn exact_error_grows_with_noise_scale() {
    let p = reference_problem();
    let (c, dec) = fitted(&p);
    let scales: Vec<f64> = (0..=40).map(|k| k as f64 * 0.05).collect();
    let sweep = noise_sweep(&p, &c, &dec, &NoiseModel::default(), &scales, 1000, 0, 100).unwrap();
    assert!((sweep[0].exact - helstrom_error(&p).unwrap()).abs() < 1e-6);
    assert!(sweep[20].exact > helstrom_error(&p).unwrap());
    for w in sweep.windows(2) {
        assert!(w[1].exact >= w[0].exact - 1e-12, "{} -> {}", w[0].scale, w[1].scale);
    }
    for (pt, s) in sweep.iter().zip(&scales) {
        assert_eq!(pt.scale, *s);
    }
}

#[test]
fn multi_copy_noise_limits() {
    let p = DiscriminationProblem::new(FRAC_PI_4, 0.1, 0.75, 3).unwrap();
    let none = GateCounts { single: 0, two: 0 };
    for m in [3, 4] {
        let pm = p.with_copies(m);
        let r = multi_copy_measurement_sim(&pm, &NoiseModel::noiseless(), none, 1000, 0, 100).unwrap();
        assert!((r.exact - helstrom_error(&pm).unwrap()).abs() < 1e-6);
    }
    // Full depolarization erases the hypothesis, so the measured error can
    // only match or exceed the guess-only 0.25.
    let full = NoiseModel::new(1.0, 1.0, 0.5, 0.5, 1.0).unwrap();
    let r = multi_copy_measurement_sim(&p, &full, GateCounts::default_for(3).unwrap(), 1000, 0, 100).unwrap();
    assert!(r.exact >= 0.25 - 1e-12, "{}", r.exact);
    assert!(multi_copy_measurement_sim(&p.with_copies(5), &full, none, 10, 0, 100).is_err());
}
