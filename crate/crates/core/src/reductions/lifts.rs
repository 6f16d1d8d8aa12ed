//! Turning an `n`-qubit quantum-input protocol into a `2n`-bit classical one.
//!
//! Both lifts encode `x ∈ {0,1,2,3}^n` as the Bell state `(σ_x ⊗ I)|Φ_n⟩`,
//! push one half through the input protocol and finish with a deferred Bell
//! measurement on Bob's side.

use crate::error::{Error, Result};
use crate::protocols::gates::{bell_unitary, circuit, controlled_pauli};
use crate::protocols::{
    canonical_ensemble, verify_correctness, verify_security, ChannelProtocol, EntangledResource,
    InputKind, MessageKind, ProtocolParts, SharedResource, VerifyConfig,
};
use crate::qmath::{Ket, UnitaryOp};
use crate::scalar::Real;

fn range(a: usize, b: usize) -> Vec<usize> {
    (a..b).collect()
}

/// Fails with [`Error::UnverifiedProtocol`] unless `p` is a quantum-input
/// protocol passing both verifiers on its canonical ensemble.
pub fn require_verified_quantum<T: Real>(
    p: &ChannelProtocol<T>,
    config: &VerifyConfig<T>,
) -> Result<()> {
    if p.input_kind() != InputKind::Quantum {
        return Err(Error::InvalidProtocol(format!(
            "`{}` does not take quantum input",
            p.name()
        )));
    }
    require_verified(p, config)
}

pub(crate) fn require_verified<T: Real>(
    p: &ChannelProtocol<T>,
    config: &VerifyConfig<T>,
) -> Result<()> {
    let ensemble = canonical_ensemble(p, config)?;
    let sec = verify_security(p, &ensemble, config)?;
    if !sec.passed {
        return Err(Error::UnverifiedProtocol(format!(
            "`{}` is not secure (deviation {:e})",
            p.name(),
            sec.deviation.as_f64()
        )));
    }
    let cor = verify_correctness(p, &ensemble, config)?;
    if !cor.passed {
        return Err(Error::UnverifiedProtocol(format!(
            "`{}` is not correct (deviation {:e})",
            p.name(),
            cor.deviation.as_f64()
        )));
    }
    Ok(())
}

fn per_key<T: Real, F>(ops: &[UnitaryOp<T>], mut build: F) -> Result<Vec<UnitaryOp<T>>>
where
    F: FnMut(&UnitaryOp<T>) -> Result<UnitaryOp<T>>,
{
    ops.iter().map(&mut build).collect()
}

fn resource_sizes<T: Real>(p: &ChannelProtocol<T>) -> (usize, usize) {
    p.resource()
        .entangled
        .as_ref()
        .map_or((0, 0), |e| (e.alice_qubits, e.bob_qubits()))
}

/// Extra-communication lift, after verifying the input protocol.
pub fn lift_extra_comm<T: Real>(
    p: &ChannelProtocol<T>,
    config: &VerifyConfig<T>,
) -> Result<ChannelProtocol<T>> {
    require_verified_quantum(p, config)?;
    lift_extra_comm_unchecked(p)
}

/// Alice makes `n` EPR pairs locally, applies `σ_x` to the first halves,
/// sends the first halves in the clear and the second halves through `p`.
///
/// Alice: `[input 2n | firsts n | seconds n | p's ancillas | p's resource half]`.
/// Message: firsts, then `p`'s message. Bob Bell-measures firsts against
/// `p`'s output.
pub fn lift_extra_comm_unchecked<T: Real>(p: &ChannelProtocol<T>) -> Result<ChannelProtocol<T>> {
    if p.input_kind() != InputKind::Quantum {
        return Err(Error::InvalidProtocol(format!(
            "`{}` does not take quantum input",
            p.name()
        )));
    }
    let n = p.input_qubits();
    let (ra, rb) = resource_sizes(p);
    let a = p.alice_ancillas();
    let alice_reg = 4 * n + a + ra;
    let firsts = range(2 * n, 3 * n);
    let pairs: Vec<usize> = range(2 * n, 4 * n);
    let input_and_firsts: Vec<usize> = range(0, 3 * n);
    // inner register index i sits at 3n + i
    let inner_alice = range(3 * n, alice_reg);
    let w = bell_unitary::<T>(n)?;
    let prep = w.adjoint();
    let cp = controlled_pauli::<T>(n)?;
    let alice_ops = per_key(p.alice_ops(), |inner| {
        circuit(
            alice_reg,
            &[
                (&prep, pairs.clone()),
                (&cp, input_and_firsts.clone()),
                (inner, inner_alice.clone()),
            ],
        )
    })?;
    let message: Vec<usize> = firsts
        .iter()
        .copied()
        .chain(p.message().iter().map(|&i| 3 * n + i))
        .collect();

    let m = p.message().len();
    let b = p.bob_ancillas();
    let bob_reg = n + m + b + rb;
    let inner_bob = range(n, bob_reg);
    let output: Vec<usize> = range(0, n)
        .into_iter()
        .chain(p.output().iter().map(|&i| n + i))
        .collect();
    let bob_ops = per_key(p.bob_ops(), |inner| {
        circuit(bob_reg, &[(inner, inner_bob.clone()), (&w, output.clone())])
    })?;

    ChannelProtocol::new(ProtocolParts {
        name: format!("lift-comm({})", p.name()),
        input_kind: InputKind::Classical,
        input_qubits: 2 * n,
        message_kind: MessageKind::Quantum,
        resource: p.resource().clone(),
        alice_ancillas: 2 * n + a,
        bob_ancillas: b,
        alice_ops,
        message,
        bob_ops,
        output,
    })
}

/// Extra-entanglement lift, after verifying the input protocol.
pub fn lift_extra_epr<T: Real>(
    p: &ChannelProtocol<T>,
    config: &VerifyConfig<T>,
) -> Result<ChannelProtocol<T>> {
    require_verified_quantum(p, config)?;
    lift_extra_epr_unchecked(p)
}

/// Adds `n` shared EPR pairs; Alice applies `σ_x` to her halves and sends
/// them through `p`. Bob Bell-measures `p`'s output against his halves.
///
/// Resource: `[p's Alice half | new Alice halves | p's Bob half | new Bob halves]`.
/// Alice: `[input 2n | p's ancillas | p's resource half | new halves]`.
pub fn lift_extra_epr_unchecked<T: Real>(p: &ChannelProtocol<T>) -> Result<ChannelProtocol<T>> {
    if p.input_kind() != InputKind::Quantum {
        return Err(Error::InvalidProtocol(format!(
            "`{}` does not take quantum input",
            p.name()
        )));
    }
    let n = p.input_qubits();
    let (ra, rb) = resource_sizes(p);
    let a = p.alice_ancillas();
    let epr = Ket::<T>::maximally_entangled(n);
    let state = match &p.resource().entangled {
        Some(e) => {
            let joint = e.state.tensor(&epr);
            let order: Vec<usize> = range(0, ra)
                .into_iter()
                .chain(range(ra + rb, ra + rb + n))
                .chain(range(ra, ra + rb))
                .chain(range(ra + rb + n, ra + rb + 2 * n))
                .collect();
            joint.permute(&order)?
        }
        None => epr,
    };
    let resource = SharedResource {
        key: p.resource().key.clone(),
        entangled: Some(EntangledResource {
            state,
            alice_qubits: ra + n,
        }),
    };

    let alice_reg = 2 * n + a + ra + n;
    let new_halves = range(2 * n + a + ra, alice_reg);
    let control: Vec<usize> = range(0, 2 * n)
        .into_iter()
        .chain(new_halves.iter().copied())
        .collect();
    let inner_map = |i: usize| if i < n { new_halves[i] } else { n + i };
    let inner_alice: Vec<usize> = (0..n + a + ra).map(inner_map).collect();
    let cp = controlled_pauli::<T>(n)?;
    let alice_ops = per_key(p.alice_ops(), |inner| {
        circuit(
            alice_reg,
            &[(&cp, control.clone()), (inner, inner_alice.clone())],
        )
    })?;
    let message: Vec<usize> = p.message().iter().map(|&i| inner_map(i)).collect();

    let m = p.message().len();
    let b = p.bob_ancillas();
    let inner_bob_len = m + b + rb;
    let bob_reg = inner_bob_len + n;
    let inner_bob = range(0, inner_bob_len);
    let output: Vec<usize> = p
        .output()
        .iter()
        .copied()
        .chain(inner_bob_len..bob_reg)
        .collect();
    let w = bell_unitary::<T>(n)?;
    let bob_ops = per_key(p.bob_ops(), |inner| {
        circuit(bob_reg, &[(inner, inner_bob.clone()), (&w, output.clone())])
    })?;

    ChannelProtocol::new(ProtocolParts {
        name: format!("lift-epr({})", p.name()),
        input_kind: InputKind::Classical,
        input_qubits: 2 * n,
        message_kind: p.message_kind(),
        resource,
        alice_ancillas: a,
        bob_ancillas: b,
        alice_ops,
        message,
        bob_ops,
        output,
    })
}
