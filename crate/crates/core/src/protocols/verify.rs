use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::ensemble::{EnsembleKind, InputEnsemble};
use super::model::{ChannelProtocol, InputKind, MessageKind};
use crate::entropy::{entanglement_measure, shannon_entropy, von_neumann};
use crate::error::Result;
use crate::qmath::ops::operator_trace_norm;
use crate::qmath::{
    random_density, seeded_rng, Bipartition, ComplexMatrix, DensityOp, Ket, SystemLayout,
};
use crate::scalar::Real;
use crate::tolerance::Tolerances;

/// Knobs shared by the verifiers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct VerifyConfig<T: Real> {
    pub tolerances: Tolerances<T>,
    pub random_probes: usize,
    pub seed: u64,
    /// Random bipartite states for the factorization check.
    pub factorization_samples: usize,
}

impl<T: Real> Default for VerifyConfig<T> {
    fn default() -> Self {
        VerifyConfig {
            tolerances: Tolerances::default(),
            random_probes: 50,
            seed: 0,
            factorization_samples: 20,
        }
    }
}

/// The ensemble matching the protocol's input kind.
pub fn canonical_ensemble<T: Real>(
    protocol: &ChannelProtocol<T>,
    config: &VerifyConfig<T>,
) -> Result<InputEnsemble<T>> {
    match protocol.input_kind() {
        InputKind::Classical => InputEnsemble::classical_basis(protocol.input_qubits()),
        InputKind::Quantum => {
            InputEnsemble::quantum_full(protocol.input_qubits(), config.random_probes, config.seed)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct SecurityReport<T: Real> {
    /// `E(|0…0⟩)`.
    pub reference: DensityOp<T>,
    /// Max trace distance to the reference over the whole ensemble.
    pub deviation: T,
    pub structured_deviation: T,
    pub random_deviation: Option<T>,
    /// Max entry of `E(|i⟩⟨j|)` over basis pairs, by linear extension.
    pub off_diagonal: Option<T>,
    /// Max `D((I⊗E)σ, Tr_H σ ⊗ ρ)` over random bipartite `σ`.
    pub factorization: Option<T>,
    /// Max off-diagonal magnitude of any per-key message (classical messages).
    pub message_coherence: Option<T>,
    pub passed: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct CorrectnessReport<T: Real> {
    /// Max over probes and keys of `D(D_k(φ), |φ⟩⟨φ|)`.
    pub deviation: T,
    pub worst_probe: usize,
    pub worst_key: usize,
    pub passed: bool,
}

/// Entropic resource usage in bits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct ResourceReport<T: Real> {
    pub comm: T,
    pub key_entropy: Option<T>,
    pub entanglement: Option<T>,
}

pub fn verify_security<T: Real>(
    protocol: &ChannelProtocol<T>,
    ensemble: &InputEnsemble<T>,
    config: &VerifyConfig<T>,
) -> Result<SecurityReport<T>> {
    let tol = config.tolerances;
    let n = protocol.input_qubits();
    let reference = protocol.encode(&Ket::qubit_basis(n, 0)?)?;

    let det: Vec<DensityOp<T>> = ensemble
        .deterministic()
        .iter()
        .map(|k| protocol.encode(k))
        .collect::<Result<_>>()?;
    let mut structured = T::zero();
    for rho in &det {
        structured = structured.max(rho.trace_distance(&reference)?);
    }
    let mut random = None;
    for k in ensemble.random() {
        let d = protocol.encode(k)?.trace_distance(&reference)?;
        random = Some(random.unwrap_or(T::zero()).max(d));
    }
    let deviation = structured.max(random.unwrap_or(T::zero()));

    let quantum = ensemble.kind() == EnsembleKind::QuantumFull;
    let off_diagonal = if quantum {
        let mut worst = T::zero();
        for pair in ensemble.pairs() {
            let e = linear_extension(&det, pair.i, pair.j, pair.plus, pair.plus_i);
            worst = worst.max(e.max_abs());
        }
        Some(worst)
    } else {
        None
    };
    let factorization = if quantum && config.factorization_samples > 0 {
        Some(factorization_deviation(protocol, &reference, config)?)
    } else {
        None
    };
    let message_coherence = if protocol.message_kind() == MessageKind::Classical {
        let mut worst = T::zero();
        for k in ensemble.probes() {
            for (key, _) in protocol.keys() {
                worst = worst.max(protocol.encode_key(k, key)?.matrix().max_off_diagonal());
            }
        }
        Some(worst)
    } else {
        None
    };

    let passed = deviation <= tol.algebra
        && off_diagonal.is_none_or(|v| v <= tol.algebra)
        && factorization.is_none_or(|v| v <= tol.inequality)
        && message_coherence.is_none_or(|v| v <= tol.classical);
    Ok(SecurityReport {
        reference,
        deviation,
        structured_deviation: structured,
        random_deviation: random,
        off_diagonal,
        factorization,
        message_coherence,
        passed,
    })
}

/// `E(|i⟩⟨j|)` from the images of `|i⟩`, `|j⟩`, `(|i⟩+|j⟩)/√2`, `(|i⟩+i|j⟩)/√2`.
fn linear_extension<T: Real>(
    images: &[DensityOp<T>],
    i: usize,
    j: usize,
    plus: usize,
    plus_i: usize,
) -> ComplexMatrix<T> {
    let two = T::lit(2.0);
    let diag = images[i].matrix() + images[j].matrix();
    let sym = &images[plus].matrix().scale_real(two) - &diag;
    let anti = &images[plus_i].matrix().scale_real(two) - &diag;
    (&sym + &anti.scale(Complex::new(T::zero(), T::one()))).scale_real(T::lit(0.5))
}

/// Max over random `σ` on `C^2 ⊗ H` of `D((I⊗E)σ, Tr_H σ ⊗ ρ)`.
pub fn factorization_deviation<T: Real>(
    protocol: &ChannelProtocol<T>,
    reference: &DensityOp<T>,
    config: &VerifyConfig<T>,
) -> Result<T> {
    let n = protocol.input_qubits();
    let d = 1usize << n;
    let basis: Vec<Ket<T>> = (0..d)
        .map(|i| Ket::qubit_basis(n, i))
        .collect::<Result<_>>()?;
    let mut images = Vec::with_capacity(d * d);
    for a in &basis {
        for b in &basis {
            images.push(protocol.encode_operator(a, b)?);
        }
    }
    let dm = reference.dim();
    let k = 2usize;
    let mut rng = seeded_rng(config.seed ^ 0x5eed_fac7);
    let mut worst = T::zero();
    for _ in 0..config.factorization_samples {
        let sigma = random_density::<T, _>(&SystemLayout::qubits(1 + n), &mut rng);
        let s = sigma.matrix();
        let mut lhs = ComplexMatrix::zeros(k * dm, k * dm);
        let mut marginal = ComplexMatrix::zeros(k, k);
        for a in 0..k {
            for b in 0..k {
                let mut block = ComplexMatrix::zeros(dm, dm);
                for i in 0..d {
                    marginal[(a, b)] = marginal[(a, b)] + s[(a * d + i, b * d + i)];
                    for j in 0..d {
                        let w = s[(a * d + i, b * d + j)];
                        block = &block + &images[i * d + j].scale(w);
                    }
                }
                for r in 0..dm {
                    for c in 0..dm {
                        lhs[(a * dm + r, b * dm + c)] = block[(r, c)];
                    }
                }
            }
        }
        let rhs = marginal.kron(reference.matrix());
        worst = worst.max(operator_trace_norm(&(&lhs - &rhs)) * T::lit(0.5));
    }
    Ok(worst)
}

pub fn verify_correctness<T: Real>(
    protocol: &ChannelProtocol<T>,
    ensemble: &InputEnsemble<T>,
    config: &VerifyConfig<T>,
) -> Result<CorrectnessReport<T>> {
    let mut report = CorrectnessReport {
        deviation: T::zero(),
        worst_probe: 0,
        worst_key: 0,
        passed: true,
    };
    for (idx, phi) in ensemble.probes().enumerate() {
        let target = phi.projector();
        for (key, _) in protocol.keys() {
            let d = protocol.decode_key(phi, key)?.trace_distance(&target)?;
            if d > report.deviation {
                report.deviation = d;
                report.worst_probe = idx;
                report.worst_key = key;
            }
        }
    }
    report.passed = report.deviation <= config.tolerances.algebra;
    Ok(report)
}

pub fn resource_report<T: Real>(protocol: &ChannelProtocol<T>) -> Result<ResourceReport<T>> {
    let reference = Ket::qubit_basis(protocol.input_qubits(), 0)?;
    let comm = match protocol.message_kind() {
        MessageKind::Quantum => von_neumann(&protocol.encode(&reference)?),
        MessageKind::Classical => shannon_entropy(&protocol.message_distribution(&reference)?),
    };
    let key_entropy = protocol.resource().key.as_ref().map(shannon_entropy);
    let entanglement = match &protocol.resource().entangled {
        Some(e) => {
            let cut = Bipartition::at(e.state.layout(), e.alice_qubits)?;
            Some(entanglement_measure(&e.state, &cut)?)
        }
        None => None,
    };
    Ok(ResourceReport {
        comm,
        key_entropy,
        entanglement,
    })
}
