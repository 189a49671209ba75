use rand::Rng;
use proptest::prelude::*;

use super::*;
use crate::linalg::{DensityOperator, QubitLayout, C64};
use crate::measures::PureEnsemble;
use crate::random::{random_ket, seeded_rng};
use crate::states::{
    de_finetti_state, eve_state, identical_pure_copies, phase_averaged_state, phase_decomposition,
    pure_de_finetti_state, DeFinettiEnsemble, PhaseMode,
};

fn ab() -> QubitLayout {
    QubitLayout::new(["A", "B"]).unwrap()
}

fn bell() -> Ket {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    Ket::new(ab(), vec![C64::new(0.0, 0.0), C64::new(s, 0.0), C64::new(s, 0.0), C64::new(0.0, 0.0)]).unwrap()
}

fn fully_mixed() -> TwoCopyState {
    let e = DeFinettiEnsemble::new(vec![(1.0, DensityOperator::maximally_mixed(ab()))]).unwrap();
    de_finetti_state(&e).unwrap()
}

fn close(a: [f64; 4], b: [f64; 4], tol: f64) -> bool {
    a.iter().zip(b).all(|(x, y)| (x - y).abs() < tol)
}

#[test]
fn naive_estimate_examples() {
    assert_eq!(
        naive_concurrence_estimate(0.25).unwrap(),
        NaiveEstimate { concurrence: 1.0, valid: true }
    );
    assert_eq!(naive_concurrence_estimate(0.0).unwrap().concurrence, 0.0);
    let over = naive_concurrence_estimate(1.0).unwrap();
    assert_eq!(over.concurrence, 2.0);
    assert!(!over.valid);
    // just inside the validity tolerance
    assert!(naive_concurrence_estimate(0.25 + 5e-10).unwrap().valid);
    assert!(!naive_concurrence_estimate(0.25 + 5e-9).unwrap().valid);
}

#[test]
fn naive_estimate_rejects_out_of_range() {
    for p in [-0.1, 1.5, f64::NAN, f64::INFINITY] {
        assert!(matches!(naive_concurrence_estimate(p), Err(Error::OutOfRange { .. })), "{p}");
    }
    // rounding below zero is tolerated and treated as zero
    assert_eq!(naive_concurrence_estimate(-1e-12).unwrap().concurrence, 0.0);
}

#[test]
fn joint_distribution_examples() {
    let bell_copies = joint_outcome_distribution(&identical_pure_copies(&bell()).unwrap()).unwrap();
    assert!(close(bell_copies.as_array(), [0.25, 0.0, 0.0, 0.75], 1e-12));

    let mixed = joint_outcome_distribution(&fully_mixed()).unwrap();
    assert!(close(mixed.as_array(), [1.0 / 16.0, 3.0 / 16.0, 3.0 / 16.0, 9.0 / 16.0], 1e-12));
    assert!((disagreement_probability(&mixed) - 0.375).abs() < 1e-12);

    let anti = joint_outcome_distribution(&eve_state(Symmetry::Antisymmetric).unwrap()).unwrap();
    assert!(close(anti.as_array(), [1.0, 0.0, 0.0, 0.0], 1e-12));
    let sym = joint_outcome_distribution(&eve_state(Symmetry::Symmetric).unwrap()).unwrap();
    assert!(close(sym.as_array(), [0.0, 0.0, 0.0, 1.0], 1e-12));

    let phase = joint_outcome_distribution(&phase_averaged_state(PhaseMode::Exact).unwrap()).unwrap();
    assert!(close(phase.as_array(), [0.25, 0.0, 0.0, 0.75], 1e-12));
    assert!(disagreement_probability(&phase).abs() < 1e-12);
}

#[test]
fn sampling_is_reproducible() {
    let s = fully_mixed();
    let a = sample_outcomes(&s, 10_000, 7).unwrap();
    let b = sample_outcomes(&s, 10_000, 7).unwrap();
    let c = sample_outcomes(&s, 10_000, 8).unwrap();
    assert_eq!(a, b);
    assert_ne!(a.counts, c.counts);
    assert_eq!(a.counts.total(), 10_000);
    assert_eq!((a.shots, a.seed), (10_000, 7));
}

#[test]
fn sampling_needs_shots() {
    assert_eq!(sample_outcomes(&fully_mixed(), 0, 1), Err(Error::ZeroShots));
}

#[test]
fn sampling_never_draws_impossible_outcomes() {
    let r = sample_outcomes(&eve_state(Symmetry::Antisymmetric).unwrap(), 5_000, 3).unwrap();
    assert_eq!(r.counts.as_array(), [5_000, 0, 0, 0]);
    let r = sample_outcomes(&identical_pure_copies(&bell()).unwrap(), 5_000, 3).unwrap();
    assert_eq!(r.counts.as_ + r.counts.sa, 0);
}



#[test]
fn sampled_frequencies_within_five_sigma() {
    let shots = 100_000u64;
    for (seed, state) in [(11, fully_mixed()), (12, identical_pure_copies(&bell()).unwrap())] {
        let d = joint_outcome_distribution(&state).unwrap();
        let r = sample_outcomes(&state, shots, seed).unwrap();
        for (p, k) in d.as_array().into_iter().zip(r.counts.as_array()) {
            let sigma = (shots as f64 * p * (1.0 - p)).sqrt();
            assert!((k as f64 - shots as f64 * p).abs() <= 5.0 * sigma.max(1e-9), "{p} vs {k}");
        }
    }
}

#[test]
fn evaluate_bell_copies() {
    let v = evaluate_scenario(&identical_pure_copies(&bell()).unwrap(), &EvaluateOptions::default()).unwrap();
    assert!((v.p_a_alice - 0.25).abs() < 1e-12 && (v.p_a_bob - 0.25).abs() < 1e-12);
    assert!((v.naive_concurrence - 1.0).abs() < 1e-10);
    assert!(v.estimator_valid);
    assert!((v.truth_single_copy_concurrence - 1.0).abs() < 1e-10);
    assert_eq!(v.truth_decomposition_bound, None);
}

#[test]
fn evaluate_phase_averaged_with_decomposition() {
    let opts = EvaluateOptions {
        decomposition: Some(phase_decomposition()),
        ..EvaluateOptions::default()
    };
    let v = evaluate_scenario(&phase_averaged_state(PhaseMode::Exact).unwrap(), &opts).unwrap();
    assert!((v.naive_concurrence - 1.0).abs() < 1e-10);
    assert!(v.truth_single_copy_concurrence.abs() < 1e-10);
    assert!((v.truth_decomposition_bound.unwrap() - 0.5).abs() < 1e-10);
    assert!(v.disagreement_prob.abs() < 1e-12);
}

#[test]
fn evaluate_eve_antisymmetric() {
    let v = evaluate_scenario(&eve_state(Symmetry::Antisymmetric).unwrap(), &EvaluateOptions::default()).unwrap();
    assert_eq!(v.naive_concurrence, 2.0);
    assert!(!v.estimator_valid);
    assert!(v.disagreement_prob.abs() < 1e-12);
}

#[test]
fn verdict_serializes_round_trip() {
    let v = evaluate_scenario(&fully_mixed(), &EvaluateOptions::default()).unwrap();
    let json = serde_json::to_string(&v).unwrap();
    let back: EstimateVerdict = serde_json::from_str(&json).unwrap();
    assert_eq!(v, back);
}

fn random_pure_ensemble(seed: u64, size: usize) -> PureEnsemble {
    let mut rng = seeded_rng(seed, 0);
    let raw: Vec<f64> = (0..size).map(|_| rng.random::<f64>() + 0.01).collect();
    let total: f64 = raw.iter().sum();
    PureEnsemble::new(raw.iter().map(|w| (w / total, random_ket(ab(), &mut rng).unwrap())).collect()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn outcome_marginals_match_side_probabilities(seed in any::<u64>(), size in 1usize..5) {
        let s = pure_de_finetti_state(&random_pure_ensemble(seed, size)).unwrap();
        let d = joint_outcome_distribution(&s).unwrap();
        prop_assert!((d.as_array().iter().sum::<f64>() - 1.0).abs() < 1e-12);
        prop_assert!(d.as_array().iter().all(|&p| p > -1e-12));
        prop_assert!((d.alice_antisym() - antisym_probability(&s, Side::Alice).unwrap()).abs() < 1e-12);
        prop_assert!((d.bob_antisym() - antisym_probability(&s, Side::Bob).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn naive_never_underestimates_pure_de_finetti(seed in any::<u64>(), size in 1usize..6) {
        let s = pure_de_finetti_state(&random_pure_ensemble(seed, size)).unwrap();
        let v = evaluate_scenario(&s, &EvaluateOptions::default()).unwrap();
        prop_assert!(v.naive_concurrence >= v.truth_single_copy_concurrence - 1e-8);
        prop_assert!(v.estimator_valid);
    }

    #[test]
    fn identical_pure_copies_never_disagree(seed in any::<u64>()) {
        let mut rng = seeded_rng(seed, 0);
        let s = identical_pure_copies(&random_ket(ab(), &mut rng).unwrap()).unwrap();
        let d = joint_outcome_distribution(&s).unwrap();
        prop_assert!(disagreement_probability(&d).abs() < 1e-12);
    }

    #[test]
    fn sampled_counts_sum_to_shots(seed in any::<u64>(), shots in 1u64..2000) {
        let r = sample_outcomes(&fully_mixed(), shots, seed).unwrap();
        prop_assert_eq!(r.counts.total(), shots);
    }
}
