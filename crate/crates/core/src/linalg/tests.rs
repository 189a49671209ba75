use std::collections::HashMap;

use proptest::prelude::*;

use super::*;
use crate::error::Error;
use crate::random::{random_density, random_ket, random_unitary, seeded_rng};

fn layout(labels: &[&str]) -> QubitLayout {
    QubitLayout::new(labels.iter().copied()).unwrap()
}

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

fn bell(a: &str, b: &str) -> Ket {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    Ket::new(layout(&[a, b]), vec![ZERO, c(s), c(s), ZERO]).unwrap()
}

fn antisym_projector(a: &str, b: &str) -> Operator {
    let mut m = Matrix::identity(4).scale_real(0.5);
    m[(1, 1)] = c(0.5);
    m[(2, 2)] = c(0.5);
    m[(1, 2)] = c(-0.5);
    m[(2, 1)] = c(-0.5);
    m[(0, 0)] = ZERO;
    m[(3, 3)] = ZERO;
    Operator::new(layout(&[a, b]), m).unwrap()
}

#[test]
fn tensor_of_maximally_mixed_qubits() {
    let a = DensityOperator::maximally_mixed(layout(&["A1"]));
    let b = DensityOperator::maximally_mixed(layout(&["A2"]));
    let ab = tensor_product(&a, &b).unwrap();
    assert_eq!(ab.layout().labels(), ["A1", "A2"]);
    assert_eq!(ab.matrix(), &Matrix::identity(4).scale_real(0.25));
}

#[test]
fn tensor_of_basis_kets() {
    let zero = Ket::basis(layout(&["A1"]), 0).unwrap();
    let one = Ket::basis(layout(&["B1"]), 1).unwrap();
    let k = zero.tensor(&one).unwrap();
    assert_eq!(k.amplitudes(), &[ZERO, ONE, ZERO, ZERO]);
}

#[test]
fn tensor_of_bell_projectors_is_rank_one() {
    let rho = bell("A1", "B1").to_density();
    let sigma = bell("A2", "B2").to_density();
    let two = rho.tensor(&sigma).unwrap();
    assert_eq!(two.matrix().dim(), 16);
    assert!((two.trace() - ONE).norm() < 1e-14);
    let ev = two.eigenvalues();
    assert!((ev[0] - 1.0).abs() < 1e-12);
    assert!(ev[1..].iter().all(|x| x.abs() < 1e-12));
    // direct outer product of the composed ket
    let ket = bell("A1", "B1").tensor(&bell("A2", "B2")).unwrap();
    assert!(ket.to_density().matrix().max_abs_diff(two.matrix()) < 1e-15);
}

#[test]
fn tensor_label_collision_is_rejected() {
    let a = DensityOperator::maximally_mixed(layout(&["A1"]));
    assert_eq!(a.tensor(&a), Err(Error::LabelCollision("A1".into())));
}

#[test]
fn partial_trace_of_bell_is_maximally_mixed() {
    let r = bell("A", "B").to_density().partial_trace(&["A"]).unwrap();
    assert!(r.matrix().max_abs_diff(&Matrix::identity(2).scale_real(0.5)) < 1e-15);
}

#[test]
fn partial_trace_of_product_returns_factor() {
    let mut rng = seeded_rng(11, 0);
    let rho = random_density(layout(&["A1", "B1"]), 4, &mut rng).unwrap();
    let sigma = random_density(layout(&["A2", "B2"]), 2, &mut rng).unwrap();
    let r = rho.tensor(&sigma).unwrap().partial_trace(&["A1", "B1"]).unwrap();
    assert_eq!(r.layout(), rho.layout());
    assert!(r.matrix().max_abs_diff(rho.matrix()) < 1e-12);
}

#[test]
fn partial_trace_keeps_original_order_and_rejects_unknown() {
    let mut rng = seeded_rng(12, 0);
    let rho = random_density(layout(&["A1", "B1", "A2", "B2"]), 3, &mut rng).unwrap();
    let r = rho.partial_trace(&["A2", "A1"]).unwrap();
    assert_eq!(r.layout().labels(), ["A1", "A2"]);
    assert_eq!(rho.partial_trace(&["C"]), Err(Error::UnknownLabel("C".into())));
    assert_eq!(rho.partial_trace::<&str>(&[]), Err(Error::EmptySelection));
}

/// Index of the basis state after reordering, by explicit label → bit bookkeeping.
fn brute_force_reindex(old: &[&str], new: &[&str], index: usize) -> usize {
    let n = old.len();
    let bits: HashMap<&str, usize> = old
        .iter()
        .enumerate()
        .map(|(p, l)| (*l, (index >> (n - 1 - p)) & 1))
        .collect();
    new.iter().fold(0, |acc, l| (acc << 1) | bits[l])
}

#[test]
fn permute_basis_ket_copy_major_to_side_major() {
    let copy_major = ["A1", "B1", "A2", "B2"];
    let side_major = ["A1", "A2", "B1", "B2"];
    let k = Ket::basis(layout(&copy_major), 0b0101).unwrap();
    let p = k.permute(&side_major).unwrap();
    assert_eq!(p.amplitudes()[0b0011], ONE);
    for index in 0..16 {
        let k = Ket::basis(layout(&copy_major), index).unwrap();
        let p = k.permute(&side_major).unwrap();
        let expected = brute_force_reindex(&copy_major, &side_major, index);
        assert_eq!(p.amplitudes()[expected], ONE, "basis index {index}");
    }
}

#[test]
fn permute_identity_and_round_trip() {
    let mut rng = seeded_rng(13, 0);
    let l = ["A1", "B1", "A2", "B2"];
    let rho = random_density(layout(&l), 4, &mut rng).unwrap();
    assert_eq!(rho.permute(&l).unwrap(), rho);
    let sigma = ["B2", "A1", "A2", "B1"];
    let back = rho.permute(&sigma).unwrap().permute(&l).unwrap();
    assert_eq!(back, rho);
}

#[test]
fn permute_rejects_non_permutation() {
    let k = Ket::basis(layout(&["A", "B"]), 0).unwrap();
    assert!(matches!(k.permute(&["A", "A"]), Err(Error::NotPermutation(_))));
    assert!(matches!(k.permute(&["A"]), Err(Error::NotPermutation(_))));
    assert!(matches!(k.permute(&["A", "C"]), Err(Error::NotPermutation(_))));
}

#[test]
fn expectation_examples() {
    let mixed = DensityOperator::maximally_mixed(layout(&["A1", "A2"]));
    let id = Operator::identity(layout(&["A1", "A2"]));
    assert!((expectation_value(&id, &mixed).unwrap() - 1.0).abs() < 1e-15);
    let pa = antisym_projector("A1", "A2");
    assert!((expectation_value(&pa, &mixed).unwrap() - 0.25).abs() < 1e-15);

    let b = bell("A", "B").to_density();
    let p00 = Operator::new(layout(&["A", "B"]), Matrix::from_diagonal(&[ONE, ZERO, ZERO, ZERO])).unwrap();
    assert_eq!(expectation_value(&p00, &b).unwrap(), 0.0);
}

#[test]
fn expectation_errors() {
    let rho = DensityOperator::maximally_mixed(layout(&["A", "B"]));
    let other = Operator::identity(layout(&["B", "A"]));
    assert!(matches!(expectation_value(&other, &rho), Err(Error::LayoutMismatch { .. })));
    let mut m = Matrix::zeros(4);
    m[(0, 1)] = ONE;
    let nh = Operator::new(layout(&["A", "B"]), m).unwrap();
    assert!(matches!(expectation_value(&nh, &rho), Err(Error::NotHermitian(_))));
}

#[test]
fn eigenvalue_examples() {
    let mixed = Operator::new(layout(&["A", "B"]), Matrix::identity(4).scale_real(0.25)).unwrap();
    assert_eq!(hermitian_eigenvalues(&mixed).unwrap(), vec![0.25; 4]);

    let b = bell("A", "B").to_density();
    let bp = Operator::new(layout(&["A", "B"]), b.matrix().clone()).unwrap();
    let ev = hermitian_eigenvalues(&bp).unwrap();
    let expected = [1.0, 0.0, 0.0, 0.0];
    assert!(ev.iter().zip(expected).all(|(a, b)| (a - b).abs() < 1e-14), "{ev:?}");

    let ev = hermitian_eigenvalues(&antisym_projector("A1", "A2")).unwrap();
    assert!(ev.iter().zip(expected).all(|(a, b)| (a - b).abs() < 1e-14), "{ev:?}");

    let mut m = Matrix::zeros(2);
    m[(0, 1)] = ONE;
    let nh = Operator::new(layout(&["A"]), m).unwrap();
    assert!(matches!(hermitian_eigenvalues(&nh), Err(Error::NotHermitian(_))));
}

#[test]
fn validation_examples() {
    let l4 = layout(&["A1", "B1", "A2", "B2"]);
    let report = validate_density(&DensityOperator::maximally_mixed(l4));
    assert!(report.passed);

    let m = Matrix::identity(4).scale_real(0.9 / 4.0);
    let short = DensityOperator::new_unchecked(layout(&["A", "B"]), m.clone()).unwrap();
    let report = validate_density(&short);
    assert!(!report.passed);
    assert!((report.trace_defect - 0.1).abs() < 1e-12);
    assert!(matches!(
        DensityOperator::new(layout(&["A", "B"]), m),
        Err(Error::InvalidDensity(_))
    ));

    let mut neg = Matrix::from_diagonal(&[c(1.2), c(-0.2)]);
    let report = validate_density(&DensityOperator::new_unchecked(layout(&["A"]), neg.clone()).unwrap());
    assert!(!report.passed);
    assert!((report.min_eigenvalue + 0.2).abs() < 1e-14);
    neg[(0, 1)] = C64::new(0.0, 0.1);
    let report = validate_density(&DensityOperator::new_unchecked(layout(&["A"]), neg).unwrap());
    assert!((report.hermiticity_defect - 0.1).abs() < 1e-14);
}

#[test]
fn ket_requires_normalization() {
    let l = layout(&["A"]);
    assert!(matches!(Ket::new(l.clone(), vec![ONE, ONE]), Err(Error::NotNormalized(_))));
    let k = Ket::normalized(l.clone(), vec![ONE, ONE]).unwrap();
    assert!((k.norm() - 1.0).abs() < 1e-15);
    assert!(Ket::normalized(l.clone(), vec![ZERO, ZERO]).is_err());
    assert!(matches!(Ket::new(l, vec![ONE]), Err(Error::DimensionMismatch { .. })));
}

#[test]
fn jacobi_matches_nalgebra() {
    use nalgebra::{Complex, DMatrix, SymmetricEigen};
    let mut rng = seeded_rng(21, 0);
    for dim in [2usize, 4, 16] {
        let u = random_unitary(dim, &mut rng);
        let h = (&u + &u.adjoint()).scale_real(0.5);
        let ours = hermitian_eigen(&h).values;
        let na = DMatrix::from_fn(dim, dim, |i, j| Complex::new(h[(i, j)].re, h[(i, j)].im));
        let mut theirs: Vec<f64> = SymmetricEigen::new(na).eigenvalues.iter().copied().collect();
        theirs.sort_by(|a, b| b.total_cmp(a));
        for (a, b) in ours.iter().zip(&theirs) {
            assert!((a - b).abs() < 1e-11, "dim {dim}: {a} vs {b}");
        }
    }
}

fn l4() -> QubitLayout {
    layout(&["A1", "B1", "A2", "B2"])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn trace_is_multiplicative(seed in any::<u64>(), ra in 1usize..=4, rb in 1usize..=4) {
        let mut rng = seeded_rng(seed, 0);
        let a = random_density(layout(&["A1", "B1"]), ra, &mut rng).unwrap();
        let b = random_density(layout(&["A2", "B2"]), rb, &mut rng).unwrap();
        let t = a.tensor(&b).unwrap().trace();
        prop_assert!((t - a.trace() * b.trace()).norm() < 1e-10);
    }

    #[test]
    fn partial_trace_preserves_trace_and_positivity(seed in any::<u64>(), rank in 1usize..=16, mask in 1usize..16) {
        let mut rng = seeded_rng(seed, 0);
        let rho = random_density(l4(), rank, &mut rng).unwrap();
        let keep: Vec<&str> = ["A1", "B1", "A2", "B2"]
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, l)| *l)
            .collect();
        let r = rho.partial_trace(&keep).unwrap();
        prop_assert!((r.trace() - ONE).norm() < 1e-10);
        prop_assert!(r.eigenvalues().last().copied().unwrap() >= -1e-9);
    }

    #[test]
    fn permutation_preserves_spectrum(seed in any::<u64>(), perm in Just(["A1", "B1", "A2", "B2"]).prop_shuffle()) {
        let mut rng = seeded_rng(seed, 0);
        let rho = random_density(l4(), 3, &mut rng).unwrap();
        let p = rho.permute(&perm).unwrap();
        let (a, b) = (rho.eigenvalues(), p.eigenvalues());
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() < 1e-12);
        }
        let back = p.permute(&["A1", "B1", "A2", "B2"]).unwrap();
        prop_assert_eq!(back, rho);
    }

    #[test]
    fn projector_expectations_are_probabilities(seed in any::<u64>(), rank in 1usize..=4) {
        let mut rng = seeded_rng(seed, 0);
        let rho = random_density(layout(&["A1", "A2"]), rank, &mut rng).unwrap();
        let psi = random_ket(layout(&["A1", "A2"]), &mut rng).unwrap();
        let proj = Operator::new(psi.layout().clone(), psi.to_density().matrix().clone()).unwrap();
        for p in [proj, antisym_projector("A1", "A2")] {
            let v = expectation_value(&p, &rho).unwrap();
            prop_assert!((-1e-10..=1.0 + 1e-10).contains(&v));
        }
    }

    #[test]
    fn partial_trace_inverts_tensor(seed in any::<u64>()) {
        let mut rng = seeded_rng(seed, 0);
        let rho = random_density(layout(&["A1", "B1"]), 4, &mut rng).unwrap();
        let sigma = random_density(layout(&["A2", "B2"]), 4, &mut rng).unwrap();
        let r = rho.tensor(&sigma).unwrap().partial_trace(&["A1", "B1"]).unwrap();
        prop_assert!(r.matrix().max_abs_diff(rho.matrix()) < 1e-12);
    }
}
