//! Protocols from the optimal-resource table, plus broken fixtures used as
//! negative controls.

use super::gates::{
    bell_unitary, bit_flips, bit_label, circuit, cnot_layer, controlled_pauli, pauli_label,
};
use super::model::{ChannelProtocol, InputKind, MessageKind, ProtocolParts, SharedResource};
use crate::entropy::ProbabilityDist;
use crate::error::{Error, Result};
use crate::qmath::{base4_digits, pauli_from_digits, Ket, UnitaryOp};
use crate::scalar::Real;

/// Names accepted by [`build_by_name`].
pub const PROTOCOL_NAMES: &[&str] = &[
    "classical-otp",
    "quantum-otp",
    "superdense",
    "teleportation",
    "epr-otp",
    "identity-leaky",
    "truncated-otp",
    "teleportation-uncorrected",
];

pub fn build_by_name<T: Real>(name: &str, n: usize) -> Result<ChannelProtocol<T>> {
    match name {
        "classical-otp" => build_classical_otp(n),
        "quantum-otp" => build_quantum_otp(n),
        "superdense" => build_superdense(n),
        "teleportation" => build_teleportation(n),
        "epr-otp" => build_epr_keyed_otp(n),
        "identity-leaky" => identity_leaky(n),
        "truncated-otp" => truncated_otp(n),
        "teleportation-uncorrected" => teleportation_uncorrected(n),
        other => Err(Error::InvalidProtocol(format!(
            "unknown protocol name `{other}`"
        ))),
    }
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidN {
            n,
            reason: "need at least one qubit".into(),
        });
    }
    // keeps the shifts below in range; the dimension guard does the rest
    if n > 24 {
        return Err(Error::DimensionLimit {
            dimension: usize::MAX,
            limit: crate::MAX_DIMENSION,
        });
    }
    Ok(())
}

/// Rejects a build before allocating anything when `2^qubits · keys` is over the limit.
fn guard(qubits: usize, key_bits: usize) -> Result<()> {
    let bits = qubits + key_bits;
    let limit = crate::MAX_DIMENSION;
    if bits >= usize::BITS as usize || (1usize << bits) > limit {
        return Err(Error::DimensionLimit {
            dimension: 1usize.checked_shl(bits as u32).unwrap_or(usize::MAX),
            limit,
        });
    }
    Ok(())
}

fn range(a: usize, b: usize) -> Vec<usize> {
    (a..b).collect()
}

/// Key `k ∈ {0,1}^n` uniform, message `x ⊕ k` sent in the clear.
pub fn build_classical_otp<T: Real>(n: usize) -> Result<ChannelProtocol<T>> {
    check_n(n)?;
    guard(n, n)?;
    let keys = 1usize << n;
    let key = ProbabilityDist::uniform((0..keys).map(|k| bit_label(k, n)).collect())?;
    let ops: Vec<UnitaryOp<T>> = (0..keys).map(|k| bit_flips(k, n)).collect();
    ChannelProtocol::new(ProtocolParts {
        name: "classical-otp".into(),
        input_kind: InputKind::Classical,
        input_qubits: n,
        message_kind: MessageKind::Classical,
        resource: SharedResource::key(key),
        alice_ancillas: 0,
        bob_ancillas: 0,
        alice_ops: ops.clone(),
        message: range(0, n),
        bob_ops: ops,
        output: range(0, n),
    })
}

fn pauli_pad<T: Real>(name: &str, n: usize, keys: Vec<usize>) -> Result<ChannelProtocol<T>> {
    let labels = keys.iter().map(|&k| pauli_label(k, n)).collect();
    let key = ProbabilityDist::uniform(labels)?;
    let ops: Vec<UnitaryOp<T>> = keys
        .iter()
        .map(|&k| pauli_from_digits(&base4_digits(k, n)))
        .collect::<Result<_>>()?;
    let bob: Vec<UnitaryOp<T>> = ops.iter().map(UnitaryOp::adjoint).collect();
    ChannelProtocol::new(ProtocolParts {
        name: name.into(),
        input_kind: InputKind::Quantum,
        input_qubits: n,
        message_kind: MessageKind::Quantum,
        resource: SharedResource::key(key),
        alice_ancillas: 0,
        bob_ancillas: 0,
        alice_ops: ops,
        message: range(0, n),
        bob_ops: bob,
        output: range(0, n),
    })
}

/// Key `x ∈ {0,1,2,3}^n` uniform, message `σ_x|φ⟩`.
pub fn build_quantum_otp<T: Real>(n: usize) -> Result<ChannelProtocol<T>> {
    check_n(n)?;
    guard(n, 2 * n)?;
    pauli_pad("quantum-otp", n, (0..1usize << (2 * n)).collect())
}

/// Superdense coding of `n_bits` classical bits over `n_bits/2` qubits.
pub fn build_superdense<T: Real>(n_bits: usize) -> Result<ChannelProtocol<T>> {
    check_n(n_bits)?;
    if !n_bits.is_multiple_of(2) {
        return Err(Error::InvalidN {
            n: n_bits,
            reason: "superdense coding needs an even number of bits".into(),
        });
    }
    let k = n_bits / 2;
    guard(4 * k, 0)?;
    // Alice: [input 2k | resA k]; Bob: [message k | resB k]
    let alice = controlled_pauli::<T>(k)?;
    let bob = bell_unitary::<T>(k)?;
    ChannelProtocol::new(ProtocolParts {
        name: "superdense".into(),
        input_kind: InputKind::Classical,
        input_qubits: n_bits,
        message_kind: MessageKind::Quantum,
        resource: SharedResource::entangled(Ket::maximally_entangled(k), k),
        alice_ancillas: 0,
        bob_ancillas: 0,
        alice_ops: vec![alice],
        message: range(2 * k, 3 * k),
        bob_ops: vec![bob],
        output: range(0, 2 * k),
    })
}

fn teleportation_with<T: Real>(name: &str, n: usize, correct: bool) -> Result<ChannelProtocol<T>> {
    check_n(n)?;
    guard(5 * n, 0)?;
    // Alice: [input n | copies 2n | resA n]
    let reg = 4 * n;
    let w = bell_unitary::<T>(n)?;
    let measured: Vec<usize> = range(0, n).into_iter().chain(range(3 * n, 4 * n)).collect();
    let copies: Vec<(usize, usize)> = measured
        .iter()
        .enumerate()
        .map(|(j, &q)| (q, n + j))
        .collect();
    let cnots = cnot_layer::<T>(&copies, reg);
    let alice = circuit(reg, &[(&w, measured), (&cnots, range(0, reg))])?;
    // Bob: [bits 2n | resB n]
    let bob = if correct {
        controlled_pauli::<T>(n)?
    } else {
        UnitaryOp::identity(1usize << (3 * n))
    };
    ChannelProtocol::new(ProtocolParts {
        name: name.into(),
        input_kind: InputKind::Quantum,
        input_qubits: n,
        message_kind: MessageKind::Classical,
        resource: SharedResource::entangled(Ket::maximally_entangled(n), n),
        alice_ancillas: 2 * n,
        bob_ancillas: 0,
        alice_ops: vec![alice],
        message: range(n, 3 * n),
        bob_ops: vec![bob],
        output: range(2 * n, 3 * n),
    })
}

/// Teleportation with a deferred Bell measurement; the message is the
/// `2n` measured bits.
pub fn build_teleportation<T: Real>(n: usize) -> Result<ChannelProtocol<T>> {
    teleportation_with("teleportation", n, true)
}

/// One-time pad whose key bits are read off shared EPR pairs.
pub fn build_epr_keyed_otp<T: Real>(n: usize) -> Result<ChannelProtocol<T>> {
    check_n(n)?;
    guard(3 * n, 0)?;
    // Alice: [input n | resA n]; Bob: [message n | resB n]
    let pairs: Vec<(usize, usize)> = (0..n).map(|i| (n + i, i)).collect();
    let op = cnot_layer::<T>(&pairs, 2 * n);
    ChannelProtocol::new(ProtocolParts {
        name: "epr-otp".into(),
        input_kind: InputKind::Classical,
        input_qubits: n,
        message_kind: MessageKind::Classical,
        resource: SharedResource::entangled(Ket::maximally_entangled(n), n),
        alice_ancillas: 0,
        bob_ancillas: 0,
        alice_ops: vec![op.clone()],
        message: range(0, n),
        bob_ops: vec![op],
        output: range(0, n),
    })
}

/// Sends the input unencrypted. Correct, not secure.
pub fn identity_leaky<T: Real>(n: usize) -> Result<ChannelProtocol<T>> {
    check_n(n)?;
    guard(n, 0)?;
    ChannelProtocol::new(ProtocolParts {
        name: "identity-leaky".into(),
        input_kind: InputKind::Quantum,
        input_qubits: n,
        message_kind: MessageKind::Quantum,
        resource: SharedResource::none(),
        alice_ancillas: 0,
        bob_ancillas: 0,
        alice_ops: vec![UnitaryOp::identity(1usize << n)],
        message: range(0, n),
        bob_ops: vec![UnitaryOp::identity(1usize << n)],
        output: range(0, n),
    })
}

/// Pauli pad restricted to `{σ_0, σ_1}^n`. Correct, not secure.
pub fn truncated_otp<T: Real>(n: usize) -> Result<ChannelProtocol<T>> {
    check_n(n)?;
    guard(n, n)?;
    let keys = (0..1usize << (2 * n))
        .filter(|&k| base4_digits(k, n).iter().all(|&d| d < 2))
        .collect();
    pauli_pad("truncated-otp", n, keys)
}

/// Teleportation where Bob skips the Pauli correction. Secure, not correct.
pub fn teleportation_uncorrected<T: Real>(n: usize) -> Result<ChannelProtocol<T>> {
    teleportation_with("teleportation-uncorrected", n, false)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builders_reject_bad_n() {
        assert!(matches!(
            build_quantum_otp::<f64>(0),
            Err(Error::InvalidN { .. })
        ));
        assert!(matches!(
            build_superdense::<f64>(3),
            Err(Error::InvalidN { .. })
        ));
        assert!(matches!(
            build_quantum_otp::<f64>(12),
            Err(Error::DimensionLimit { .. })
        ));
        assert!(build_quantum_otp::<f64>(4).is_ok());
        assert!(matches!(
            build_quantum_otp::<f64>(5),
            Err(Error::DimensionLimit { .. })
        ));
        assert!(build_by_name::<f64>("nope", 1).is_err());
    }

    #[test]
    fn quantum_otp_pads_to_maximally_mixed() {
        let p = build_quantum_otp::<f64>(1).unwrap();
        assert_eq!(p.key_count(), 4);
        let plus = Ket::normalized(
            crate::qmath::SystemLayout::qubits(1),
            vec![
                num_complex::Complex::new(1.0, 0.0),
                num_complex::Complex::new(0.0, 1.0),
            ],
        )
        .unwrap();
        let rho = p.encode(&plus).unwrap();
        let mixed = crate::qmath::DensityOp::maximally_mixed(crate::qmath::SystemLayout::qubits(1));
        assert!(rho.trace_distance(&mixed).unwrap() < 1e-12);
        assert!(
            p.decode_key(&plus, 2)
                .unwrap()
                .trace_distance(&plus.projector())
                .unwrap()
                < 1e-12
        );
    }

    #[test]
    fn classical_otp_message_of_01_is_uniform() {
        let p = build_classical_otp::<f64>(2).unwrap();
        let rho = p.encode(&Ket::qubit_basis(2, 1).unwrap()).unwrap();
        for i in 0..4 {
            assert!((rho.matrix()[(i, i)].re - 0.25).abs() < 1e-12);
        }
        assert!(rho.matrix().max_off_diagonal() < 1e-12);
    }

    #[test]
    fn teleportation_of_plus() {
        let p = build_teleportation::<f64>(1).unwrap();
        let plus = Ket::normalized(
            crate::qmath::SystemLayout::qubits(1),
            vec![num_complex::Complex::new(1.0, 0.0); 2],
        )
        .unwrap();
        let out = p.decode(&plus).unwrap();
        assert!(out.trace_distance(&plus.projector()).unwrap() < 1e-12);
        let dist = p.message_distribution(&plus).unwrap();
        assert!(dist.probs().iter().all(|&q| (q - 0.25).abs() < 1e-12));
    }

    #[test]
    fn superdense_message_is_one_mixed_qubit() {
        let p = build_superdense::<f64>(2).unwrap();
        for x in 0..4 {
            let input = Ket::qubit_basis(2, x).unwrap();
            let rho = p.encode(&input).unwrap();
            assert_eq!(rho.dim(), 2);
            assert!((rho.matrix()[(0, 0)].re - 0.5).abs() < 1e-12);
            assert!(
                p.decode(&input)
                    .unwrap()
                    .trace_distance(&input.projector())
                    .unwrap()
                    < 1e-12
            );
        }
    }

    #[test]
    fn descriptor_round_trip() {
        for name in PROTOCOL_NAMES {
            let n = if *name == "superdense" { 2 } else { 1 };
            let p = build_by_name::<f64>(name, n).unwrap();
            let json = serde_json::to_string(&p).unwrap();
            let back: ChannelProtocol<f64> = serde_json::from_str(&json).unwrap();
            assert_eq!(p, back, "{name}");
        }
    }

    #[test]
    fn descriptor_is_validated() {
        let p = build_quantum_otp::<f64>(1).unwrap();
        let mut v = serde_json::to_value(&p).unwrap();
        v["output"] = serde_json::json!([0, 0]);
        assert!(serde_json::from_value::<ChannelProtocol<f64>>(v).is_err());
        let mut v = serde_json::to_value(&p).unwrap();
        v["alice_ops"][0][0][0] = serde_json::json!([2.0, 0.0]);
        assert!(serde_json::from_value::<ChannelProtocol<f64>>(v).is_err());
    }
}
