use proptest::prelude::*;

use pqchan::entropy::{
    check_fact1, check_mutual_information_identity, shannon_entropy, von_neumann, ProbabilityDist,
};
use pqchan::protocols::build_quantum_otp;
use pqchan::qmath::{
    local_transition, pauli_from_digits, purify, random_density, random_ket, random_unitary,
    schmidt_decompose, seeded_rng, Bipartition, DensityOp, Ket, SystemLayout,
};

fn cases() -> ProptestConfig {
    ProptestConfig::with_cases(48)
}

proptest! {
    #![proptest_config(cases())]

    #[test]
    fn schmidt_reconstructs_and_is_symmetric(seed in any::<u64>(), n in 2usize..5, k in 1usize..4) {
        let k = k.min(n - 1);
        let layout = SystemLayout::qubits(n);
        let psi = random_ket::<f64, _>(&layout, &mut seeded_rng(seed));
        let cut = Bipartition::at(&layout, k).unwrap();
        let dec = schmidt_decompose(&psi, &cut).unwrap();
        let back = dec.reconstruct().unwrap();
        let err = back
            .amplitudes()
            .iter()
            .zip(psi.amplitudes())
            .fold(0.0f64, |m, (a, b)| m.max((a - b).norm()));
        prop_assert!(err <= 1e-9);
        let total: f64 = dec.weights().iter().sum();
        prop_assert!((total - 1.0).abs() <= 1e-9);

        let right: Vec<usize> = (k..n).collect();
        let flipped = schmidt_decompose(&psi, &Bipartition::new(&layout, &right).unwrap()).unwrap();
        prop_assert_eq!(dec.rank(), flipped.rank());
        for (a, b) in dec.coefficients.iter().zip(&flipped.coefficients) {
            prop_assert!((a - b).abs() <= 1e-9);
        }
    }

    #[test]
    fn pauli_strings_are_orthogonal(a in proptest::collection::vec(0u8..4, 1..4), b in proptest::collection::vec(0u8..4, 1..4)) {
        let n = a.len().min(b.len());
        let (a, b) = (&a[..n], &b[..n]);
        let pa = pauli_from_digits::<f64>(a).unwrap();
        let pb = pauli_from_digits::<f64>(b).unwrap();
        let tr = pa.matrix().inner(pb.matrix());
        let expected = if a == b { (1usize << n) as f64 } else { 0.0 };
        prop_assert!((tr.re - expected).abs() <= 1e-12 && tr.im.abs() <= 1e-12);
    }

    #[test]
    fn entropy_is_unitarily_invariant(seed in any::<u64>(), n in 1usize..4) {
        let mut rng = seeded_rng(seed);
        let rho = random_density::<f64, _>(&SystemLayout::qubits(n), &mut rng);
        let u = random_unitary::<f64, _>(1 << n, &mut rng);
        let turned = rho.conjugate_by(u.matrix()).unwrap();
        prop_assert!((von_neumann(&rho) - von_neumann(&turned)).abs() <= 1e-9);
    }

    #[test]
    fn mutual_information_is_relative_entropy(seed in any::<u64>()) {
        let rho = random_density::<f64, _>(&SystemLayout::qubits(2), &mut seeded_rng(seed));
        let r = check_mutual_information_identity(&rho, &[0], &[1]).unwrap();
        prop_assert!(r.residual.unwrap() <= 1e-7);
    }

    #[test]
    fn bipartite_and_tripartite_inequalities_hold(seed in any::<u64>()) {
        let rho = random_density::<f64, _>(&SystemLayout::qubits(3), &mut seeded_rng(seed));
        let groups = vec![vec![0], vec![1], vec![2]];
        for r in check_fact1(&rho, &groups, false).unwrap() {
            prop_assert!(r.holds(1e-8), "{} {}", r.name, r.slack);
        }
    }

    #[test]
    fn diagonal_states_have_shannon_entropy(weights in proptest::collection::vec(0.0f64..1.0, 4)) {
        let total: f64 = weights.iter().sum();
        prop_assume!(total > 1e-3);
        let probs: Vec<f64> = weights.iter().map(|w| w / total).collect();
        let rho = DensityOp::diagonal(SystemLayout::qubits(2), &probs).unwrap();
        let dist = ProbabilityDist::from_probs(probs).unwrap();
        prop_assert!((von_neumann(&rho) - shannon_entropy(&dist)).abs() <= 1e-9);
    }

    #[test]
    fn purifications_are_related_by_a_local_unitary(seed in any::<u64>(), n in 1usize..3) {
        let mut rng = seeded_rng(seed);
        let layout = SystemLayout::qubits(n);
        let rho = random_density::<f64, _>(&layout, &mut rng);
        let phi1 = purify(&rho);
        let v = random_unitary::<f64, _>(1 << n, &mut rng);
        let targets: Vec<usize> = (0..n).collect();
        let phi2 = phi1.apply(v.matrix(), &targets).unwrap();
        let cut = Bipartition::at(phi1.layout(), n).unwrap();
        let u = local_transition(&phi1, &phi2, &cut, 1e-9).unwrap();
        let moved = phi1.apply(u.matrix(), &targets).unwrap();
        prop_assert!((moved.inner(&phi2).norm() - 1.0).abs() <= 1e-8);
    }

    #[test]
    fn quantum_otp_hides_random_inputs(seed in any::<u64>()) {
        let p = build_quantum_otp::<f64>(1).unwrap();
        let phi = random_ket::<f64, _>(&SystemLayout::qubits(1), &mut seeded_rng(seed));
        let mixed = DensityOp::maximally_mixed(SystemLayout::qubits(1));
        prop_assert!(p.encode(&phi).unwrap().trace_distance(&mixed).unwrap() <= 1e-12);
    }

    #[test]
    fn partial_trace_preserves_trace(seed in any::<u64>(), keep in proptest::collection::btree_set(0usize..3, 1..3)) {
        let psi = random_ket::<f64, _>(&SystemLayout::qubits(3), &mut seeded_rng(seed));
        let keep: Vec<usize> = keep.into_iter().collect();
        let rho = pqchan::qmath::reduce_ket(&psi, &keep).unwrap();
        prop_assert!((rho.matrix().trace().re - 1.0).abs() <= 1e-12);
        prop_assert!(DensityOp::new(rho.layout().clone(), rho.matrix().clone()).is_ok());
    }
}

#[test]
fn f32_core_matches_f64() {
    let psi64 = random_ket::<f64, _>(&SystemLayout::qubits(3), &mut seeded_rng(4));
    let psi32: Ket<f32> = psi64.map_scalar();
    let cut = Bipartition::at(psi64.layout(), 1).unwrap();
    let e64 = pqchan::entropy::entanglement_measure(&psi64, &cut).unwrap();
    let e32 = pqchan::entropy::entanglement_measure(&psi32, &cut).unwrap();
    assert!((e64 - e32 as f64).abs() < 1e-4);
    let p = build_quantum_otp::<f32>(1).unwrap();
    let rho = p.encode(&Ket::<f32>::qubit_basis(1, 0).unwrap()).unwrap();
    assert!((rho.matrix()[(0, 0)].re - 0.5).abs() < 1e-6);
}
