use pqchan::protocols::{
    build_classical_otp, build_epr_keyed_otp, build_quantum_otp, build_superdense,
    build_teleportation, canonical_ensemble, identity_leaky, resource_report, verify_correctness,
    verify_security, InputKind, VerifyConfig,
};
use pqchan::qmath::{random_ket, seeded_rng, DensityOp, Ket, SystemLayout};
use pqchan::reductions::{
    audit_protocol, audit_quantum_input, audit_theorem_main, leaky_teleportation_rsp,
    lift_extra_comm, lift_extra_comm_unchecked, lift_extra_epr, rsp_to_pqc, teleportation_rsp,
};
use pqchan::Error;

fn config() -> VerifyConfig<f64> {
    VerifyConfig::default()
}

fn assert_verified(p: &pqchan::ChannelProtocol64) {
    let cfg = config();
    let e = canonical_ensemble(p, &cfg).unwrap();
    let s = verify_security(p, &e, &cfg).unwrap();
    assert!(s.passed, "{} security {}", p.name(), s.deviation);
    let c = verify_correctness(p, &e, &cfg).unwrap();
    assert!(c.passed, "{} correctness {}", p.name(), c.deviation);
}

#[test]
fn comm_lift_of_quantum_otp() {
    let lifted = lift_extra_comm(&build_quantum_otp::<f64>(1).unwrap(), &config()).unwrap();
    assert_eq!(lifted.input_kind(), InputKind::Classical);
    assert_eq!(lifted.input_qubits(), 2);
    assert_verified(&lifted);
    let mixed = DensityOp::maximally_mixed(SystemLayout::qubits(2));
    for x in 0..4 {
        let rho = lifted.encode(&Ket::qubit_basis(2, x).unwrap()).unwrap();
        assert!(rho.trace_distance(&mixed).unwrap() <= 1e-9);
    }
    let r = resource_report(&lifted).unwrap();
    assert!((r.key_entropy.unwrap() - 2.0).abs() < 1e-12);
}

#[test]
fn comm_lift_message_factorizes_for_teleportation() {
    let inner = build_teleportation::<f64>(1).unwrap();
    let lifted = lift_extra_comm(&inner, &config()).unwrap();
    assert_verified(&lifted);
    // first qubit maximally mixed, the rest is teleportation's message
    let rho_inner = inner.encode(&Ket::qubit_basis(1, 0).unwrap()).unwrap();
    let expected = DensityOp::maximally_mixed(SystemLayout::qubits(1)).tensor(&rho_inner);
    for x in 0..4 {
        let rho = lifted.encode(&Ket::qubit_basis(2, x).unwrap()).unwrap();
        assert!(rho.matrix().max_abs_diff(expected.matrix()) <= 1e-9);
    }
}

#[test]
fn epr_lift_of_quantum_otp() {
    let inner = build_quantum_otp::<f64>(1).unwrap();
    let lifted = lift_extra_epr(&inner, &config()).unwrap();
    assert_verified(&lifted);
    let before = resource_report(&inner).unwrap();
    let after = resource_report(&lifted).unwrap();
    assert!((after.comm - before.comm).abs() <= 1e-9);
    assert!((after.entanglement.unwrap() - 1.0).abs() <= 1e-9);
    assert_eq!(after.key_entropy, before.key_entropy);
    let mixed = DensityOp::maximally_mixed(SystemLayout::qubits(1));
    for x in 0..4 {
        let rho = lifted.encode(&Ket::qubit_basis(2, x).unwrap()).unwrap();
        assert!(rho.trace_distance(&mixed).unwrap() <= 1e-9);
    }
}

#[test]
fn epr_lift_adds_n_ebits_to_an_entangled_resource() {
    let inner = build_teleportation::<f64>(1).unwrap();
    let lifted = lift_extra_epr(&inner, &config()).unwrap();
    assert_verified(&lifted);
    let e0 = resource_report(&inner).unwrap().entanglement.unwrap();
    let e1 = resource_report(&lifted).unwrap().entanglement.unwrap();
    assert!((e1 - e0 - 1.0).abs() <= 1e-9);
}

#[test]
fn lifting_the_identity() {
    let leaky = identity_leaky::<f64>(1).unwrap();
    assert!(matches!(
        lift_extra_comm(&leaky, &config()),
        Err(Error::UnverifiedProtocol(_))
    ));
    // built anyway, the lifted protocol fails security
    let lifted = lift_extra_comm_unchecked(&leaky).unwrap();
    let cfg = config();
    let e = canonical_ensemble(&lifted, &cfg).unwrap();
    assert!(!verify_security(&lifted, &e, &cfg).unwrap().passed);
    assert!(verify_correctness(&lifted, &e, &cfg).unwrap().passed);
}

#[test]
fn lifts_need_quantum_input() {
    let p = build_classical_otp::<f64>(1).unwrap();
    assert!(matches!(
        lift_extra_comm_unchecked(&p),
        Err(Error::InvalidProtocol(_))
    ));
}

fn slacks(report: &pqchan::reductions::AuditReport<f64>) -> Vec<(String, f64, f64, f64)> {
    report
        .audits
        .iter()
        .map(|a| (a.quantity.clone(), a.measured, a.bound, a.slack))
        .collect()
}

#[test]
fn classical_input_audits_saturate() {
    let cfg = config();
    let r = audit_theorem_main(&build_superdense::<f64>(2).unwrap(), &cfg).unwrap();
    assert!(r.all_satisfied());
    for (q, _, _, s) in slacks(&r) {
        assert!(s.abs() <= 1e-7, "{q} {s}");
    }
    let r = audit_theorem_main(&build_classical_otp::<f64>(2).unwrap(), &cfg).unwrap();
    let s = slacks(&r);
    assert_eq!(s[0].0, "key_entropy");
    assert!(s.iter().all(|(_, _, b, sl)| *b == 2.0 && sl.abs() <= 1e-7));
    let r = audit_theorem_main(&build_epr_keyed_otp::<f64>(2).unwrap(), &cfg).unwrap();
    assert!(slacks(&r)
        .iter()
        .all(|(_, _, b, sl)| *b == 2.0 && sl.abs() <= 1e-7));
}

#[test]
fn teleportation_classical_restriction() {
    let p = build_teleportation::<f64>(1)
        .unwrap()
        .with_input_kind(InputKind::Classical);
    let r = audit_theorem_main(&p, &config()).unwrap();
    let s = slacks(&r);
    assert_eq!(s[0].0, "entanglement");
    assert!((s[0].1 - 1.0).abs() < 1e-9 && s[0].2 == 1.0);
    assert_eq!(s[1].0, "comm_entropy");
    assert!((s[1].1 - 2.0).abs() < 1e-9 && s[1].2 == 1.0);
}

#[test]
fn quantum_input_audits_saturate() {
    let cfg = config();
    let r = audit_quantum_input(&build_quantum_otp::<f64>(1).unwrap(), &cfg).unwrap();
    let s = slacks(&r);
    assert_eq!(s.len(), 2);
    assert_eq!(s[0].0, "key_entropy");
    assert!((s[0].1 - 2.0).abs() < 1e-9 && s[0].2 == 2.0);
    assert!(s.iter().all(|(_, _, _, sl)| sl.abs() <= 1e-7));

    let r = audit_quantum_input(&build_teleportation::<f64>(1).unwrap(), &cfg).unwrap();
    let s = slacks(&r);
    assert!(s.iter().all(|(_, _, _, sl)| sl.abs() <= 1e-7), "{s:?}");
    assert!(r.log.iter().any(|l| l.contains("lift-epr(teleportation)")));
}

#[test]
fn audit_rejects_insecure_protocol() {
    let r = audit_protocol(&identity_leaky::<f64>(1).unwrap(), &config());
    assert!(matches!(r, Err(Error::UnverifiedProtocol(_))));
}

#[test]
fn teleportation_rsp_is_oblivious() {
    let rsp = teleportation_rsp::<f64>(1).unwrap();
    assert_eq!(rsp.outcomes(), 4);
    let profile = rsp.check_oblivious(&config()).unwrap();
    assert!(profile
        .probabilities
        .iter()
        .all(|p| (p - 0.25).abs() < 1e-12));
    let phi = random_ket::<f64, _>(&SystemLayout::qubits(1), &mut seeded_rng(3));
    for m in 0..4 {
        let (_, bob) = rsp.run(&phi, m, 1e-12).unwrap();
        let d = bob.unwrap().trace_distance(&phi.projector()).unwrap();
        assert!(d < 1e-12);
    }
}

#[test]
fn rsp_to_pqc_from_teleportation() {
    let cfg = config();
    let rsp = teleportation_rsp::<f64>(1).unwrap();
    let p = rsp_to_pqc(&rsp, &cfg).unwrap();
    assert_verified(&p);
    let r = resource_report(&p).unwrap();
    assert!((r.key_entropy.unwrap() - 2.0).abs() <= 1e-9);
    assert!((r.comm - 1.0).abs() <= 1e-9);
    let reference = rsp.bob_reference().unwrap();
    let e = canonical_ensemble(&p, &cfg).unwrap();
    for phi in e.probes() {
        assert!(p.encode(phi).unwrap().trace_distance(&reference).unwrap() <= 1e-9);
    }
}

#[test]
fn leaky_rsp_is_rejected() {
    let rsp = leaky_teleportation_rsp::<f64>().unwrap();
    match rsp_to_pqc(&rsp, &config()) {
        Err(Error::NotOblivious { check, .. }) => assert_eq!(check, "residue"),
        other => panic!("expected rejection, got {other:?}"),
    }
}

#[test]
fn rsp_with_mixed_residue_converts() {
    use pqchan::protocols::gates::bell_state;
    use pqchan::protocols::EntangledResource;
    use pqchan::qmath::{base4_digits, pauli_from_digits, ComplexMatrix, UnitaryOp};
    use pqchan::reductions::ObliviousRsp;

    // teleportation plus a spectator EPR pair: Bob's leftover is I/2
    let pairs = Ket::<f64>::maximally_entangled(2);
    let resource = EntangledResource {
        state: pairs,
        alice_qubits: 2,
    };
    let id2 = ComplexMatrix::<f64>::identity(2);
    let mut projectors = Vec::new();
    let mut corrections = Vec::new();
    for x in 0..4 {
        // Alice's register is [input | pair-1 half | pair-2 half]
        projectors.push(
            bell_state::<f64>(x, 1)
                .unwrap()
                .projector()
                .matrix()
                .kron(&id2),
        );
        let sigma = pauli_from_digits::<f64>(&base4_digits(x, 1)).unwrap();
        corrections.push(sigma.tensor(&UnitaryOp::identity(2)));
    }
    let rsp = ObliviousRsp::new(1, resource, projectors, corrections, 0, vec![0]).unwrap();
    let cfg = config();
    let profile = rsp.check_oblivious(&cfg).unwrap();
    let residue = profile.residues[0].as_ref().unwrap();
    let half = DensityOp::maximally_mixed(SystemLayout::qubits(1));
    assert!(residue.trace_distance(&half).unwrap() < 1e-12);

    let p = rsp_to_pqc(&rsp, &cfg).unwrap();
    assert_eq!(p.alice_ancillas(), 2);
    assert_verified(&p);
    let reference = rsp.bob_reference().unwrap();
    let phi = random_ket::<f64, _>(&SystemLayout::qubits(1), &mut seeded_rng(8));
    assert!(p.encode(&phi).unwrap().trace_distance(&reference).unwrap() <= 1e-9);
}

#[test]
fn rsp_rejects_non_projective_measurements() {
    use pqchan::protocols::EntangledResource;
    use pqchan::qmath::{ComplexMatrix, UnitaryOp};
    use pqchan::reductions::ObliviousRsp;

    let resource = EntangledResource {
        state: Ket::<f64>::maximally_entangled(1),
        alice_qubits: 1,
    };
    let half = ComplexMatrix::<f64>::identity(4).scale_real(0.5f64.sqrt());
    let r = ObliviousRsp::new(
        1,
        resource,
        vec![half.clone(), half],
        vec![UnitaryOp::identity(2), UnitaryOp::identity(2)],
        0,
        vec![0],
    );
    assert!(matches!(r, Err(Error::InvalidProtocol(_))));
}
