//! Oblivious remote state preparation and its conversion to a keyed channel.

use crate::entropy::ProbabilityDist;
use crate::error::{Error, Result};
use crate::protocols::gates::{bell_state, circuit};
use crate::protocols::{
    ChannelProtocol, EntangledResource, InputEnsemble, InputKind, MessageKind, ProtocolParts,
    SharedResource, VerifyConfig,
};
use crate::qmath::linalg::complete_basis;
use crate::qmath::{
    base4_digits, partial_trace_outer, pauli_from_digits, purify, reduce_ket, ComplexMatrix,
    DensityOp, Ket, SystemLayout, UnitaryOp,
};
use crate::scalar::Real;

/// Alice measures `input ⊗ her half` projectively and sends the outcome
/// `m`; Bob applies `U_m` to `[his half | ancillas]` and keeps `output`.
///
/// Only projective measurements are modelled.
#[derive(Debug, Clone)]
pub struct ObliviousRsp<T: Real> {
    n: usize,
    resource: EntangledResource<T>,
    projectors: Vec<ComplexMatrix<T>>,
    corrections: Vec<UnitaryOp<T>>,
    bob_ancillas: usize,
    output: Vec<usize>,
}

/// Outcome statistics shared by every probe of an oblivious RSP.
#[derive(Debug, Clone)]
pub struct RspProfile<T: Real> {
    /// `p_m`, identical for every input.
    pub probabilities: Vec<T>,
    /// Whether `p_m` is above the clip threshold.
    pub occurs: Vec<bool>,
    /// Bob's leftover state `σ_m` on the non-output positions, per outcome;
    /// `None` when the outcome never occurs or nothing is left over.
    pub residues: Vec<Option<DensityOp<T>>>,
}

impl<T: Real> ObliviousRsp<T> {
    pub fn new(
        n: usize,
        resource: EntangledResource<T>,
        projectors: Vec<ComplexMatrix<T>>,
        corrections: Vec<UnitaryOp<T>>,
        bob_ancillas: usize,
        output: Vec<usize>,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidN {
                n,
                reason: "need at least one input qubit".into(),
            });
        }
        if projectors.is_empty() || projectors.len() != corrections.len() {
            return Err(Error::InvalidProtocol(format!(
                "{} measurement operators for {} corrections",
                projectors.len(),
                corrections.len()
            )));
        }
        let ra = resource.alice_qubits;
        let rb = resource.bob_qubits();
        let total = n + ra + rb + bob_ancillas;
        if total >= usize::BITS as usize || (1usize << total) > crate::MAX_DIMENSION {
            return Err(Error::DimensionLimit {
                dimension: 1usize.checked_shl(total as u32).unwrap_or(usize::MAX),
                limit: crate::MAX_DIMENSION,
            });
        }
        let da = 1usize << (n + ra);
        let db = 1usize << (rb + bob_ancillas);
        if let Some(m) = projectors.iter().find(|m| m.rows() != da || m.cols() != da) {
            return Err(Error::DimensionMismatch {
                expected: da,
                actual: m.rows(),
            });
        }
        let tol = crate::Tolerances::<T>::default().algebra;
        for m in &projectors {
            let square = m.matmul(m)?;
            let err = square.max_abs_diff(m).max(m.hermiticity_error());
            if err.is_nan() || err > tol {
                return Err(Error::InvalidProtocol(format!(
                    "measurement operator is not an orthogonal projector (deviation {:e})",
                    err.as_f64()
                )));
            }
        }
        if let Some(u) = corrections.iter().find(|u| u.dim() != db) {
            return Err(Error::DimensionMismatch {
                expected: db,
                actual: u.dim(),
            });
        }
        let bob = rb + bob_ancillas;
        let mut seen = vec![false; bob];
        if output.len() != n
            || output
                .iter()
                .any(|&i| i >= bob || std::mem::replace(&mut seen[i], true))
        {
            return Err(Error::InvalidProtocol(
                "output must name n distinct positions of Bob's register".into(),
            ));
        }
        Ok(ObliviousRsp {
            n,
            resource,
            projectors,
            corrections,
            bob_ancillas,
            output,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn outcomes(&self) -> usize {
        self.projectors.len()
    }

    pub fn resource(&self) -> &EntangledResource<T> {
        &self.resource
    }

    fn bob_register(&self) -> usize {
        self.resource.bob_qubits() + self.bob_ancillas
    }

    /// Bob's register positions that are not output.
    fn rest(&self) -> Vec<usize> {
        (0..self.bob_register())
            .filter(|i| !self.output.contains(i))
            .collect()
    }

    /// Bob's register before any correction: his half of the resource and
    /// fresh ancillas.
    pub fn bob_reference(&self) -> Result<DensityOp<T>> {
        let ra = self.resource.alice_qubits;
        let len = self.resource.state.layout().len();
        let half = reduce_ket(&self.resource.state, &(ra..len).collect::<Vec<_>>())?;
        let half = DensityOp::new(SystemLayout::qubits(len - ra), half.matrix().clone())?;
        if self.bob_ancillas == 0 {
            return Ok(half);
        }
        Ok(half.tensor(&Ket::zeros(SystemLayout::qubits(self.bob_ancillas)).projector()))
    }

    /// `Σ_m M_m† M_m − I`, largest entry.
    pub fn completeness_error(&self) -> T {
        let d = self.projectors[0].rows();
        let mut acc = ComplexMatrix::zeros(d, d);
        for m in &self.projectors {
            let mm = m.adjoint().matmul(m).expect("square projectors");
            acc = &acc + &mm;
        }
        acc.max_abs_diff(&ComplexMatrix::identity(d))
    }

    /// `(p_m, Bob's corrected register)` for outcome `m`, or `p_m` alone when
    /// it is below `cutoff`.
    pub fn run(&self, phi: &Ket<T>, m: usize, cutoff: T) -> Result<(T, Option<DensityOp<T>>)> {
        let n = self.n;
        let ra = self.resource.alice_qubits;
        let rb = self.resource.bob_qubits();
        let phi = Ket::new(SystemLayout::qubits(n), phi.amplitudes().to_vec())?;
        let res = Ket::new(
            SystemLayout::qubits(ra + rb),
            self.resource.state.amplitudes().to_vec(),
        )?;
        let mut state = phi.tensor(&res);
        if self.bob_ancillas > 0 {
            state = state.tensor(&Ket::zeros(SystemLayout::qubits(self.bob_ancillas)));
        }
        let alice: Vec<usize> = (0..n + ra).collect();
        let bob: Vec<usize> = (n + ra..state.layout().len()).collect();
        let projected = state.apply(&self.projectors[m], &alice)?;
        let p = projected.norm() * projected.norm();
        if p <= cutoff {
            return Ok((p, None));
        }
        let post = Ket::normalized(projected.layout().clone(), projected.amplitudes().to_vec())?;
        let corrected = post.apply(self.corrections[m].matrix(), &bob)?;
        let rho = partial_trace_outer(&corrected, &corrected, &bob)?;
        Ok((
            p,
            Some(DensityOp::from_parts(SystemLayout::qubits(bob.len()), rho)),
        ))
    }

    /// Checks completeness, then for every probe: outcome probabilities,
    /// residues and output against the first probe.
    pub fn check_oblivious(&self, config: &VerifyConfig<T>) -> Result<RspProfile<T>> {
        let tol = config.tolerances;
        let completeness = self.completeness_error();
        if completeness.is_nan() || completeness > tol.classical {
            return Err(not_oblivious("completeness", 0, completeness));
        }
        let ensemble = InputEnsemble::<T>::quantum_full(self.n, config.random_probes, config.seed)?;
        let rest = self.rest();
        let order: Vec<usize> = self
            .output
            .iter()
            .copied()
            .chain(rest.iter().copied())
            .collect();
        let mut profile: Option<RspProfile<T>> = None;
        for (idx, phi) in ensemble.probes().enumerate() {
            let mut probs = Vec::with_capacity(self.outcomes());
            let mut occurs = Vec::with_capacity(self.outcomes());
            let mut residues = Vec::with_capacity(self.outcomes());
            for m in 0..self.outcomes() {
                let (p, bob) = self.run(phi, m, tol.clip)?;
                if let Some(reference) = &profile {
                    let dp = (p - reference.probabilities[m]).abs();
                    if dp.is_nan() || dp > tol.algebra {
                        return Err(not_oblivious("probability", idx, dp));
                    }
                }
                probs.push(p);
                occurs.push(bob.is_some());
                let Some(bob) = bob else {
                    residues.push(None);
                    continue;
                };
                let sigma = if rest.is_empty() {
                    None
                } else {
                    Some(crate::qmath::partial_trace(&bob, &rest)?)
                };
                if let (Some(s), Some(Some(expected))) =
                    (&sigma, profile.as_ref().map(|r| &r.residues[m]))
                {
                    let d = s.trace_distance(expected)?;
                    if d.is_nan() || d > tol.algebra {
                        return Err(not_oblivious("residue", idx, d));
                    }
                }
                let target = match &sigma {
                    Some(s) => phi.projector().matrix().kron(s.matrix()),
                    None => phi.projector().matrix().clone(),
                };
                let layout = SystemLayout::qubits(self.bob_register());
                let target = DensityOp::from_parts(layout, target);
                let d = bob.permute(&order)?.trace_distance(&target)?;
                if d.is_nan() || d > tol.algebra {
                    return Err(not_oblivious("output", idx, d));
                }
                residues.push(sigma);
            }
            if profile.is_none() {
                profile = Some(RspProfile {
                    probabilities: probs,
                    occurs,
                    residues,
                });
            }
        }
        profile.ok_or_else(|| Error::InvalidProtocol("empty probe ensemble".into()))
    }
}

fn not_oblivious<T: Real>(check: &str, probe: usize, deviation: T) -> Error {
    Error::NotOblivious {
        check: check.to_string(),
        probe,
        deviation: deviation.as_f64(),
    }
}

/// Teleportation as an RSP: Bell measurement outcome `x`, correction `σ_x`.
pub fn teleportation_rsp<T: Real>(n: usize) -> Result<ObliviousRsp<T>> {
    let resource = EntangledResource {
        state: Ket::maximally_entangled(n),
        alice_qubits: n,
    };
    let outcomes = 1usize << (2 * n);
    let mut projectors = Vec::with_capacity(outcomes);
    let mut corrections = Vec::with_capacity(outcomes);
    for x in 0..outcomes {
        projectors.push(bell_state::<T>(x, n)?.projector().matrix().clone());
        corrections.push(pauli_from_digits(&base4_digits(x, n))?);
    }
    ObliviousRsp::new(n, resource, projectors, corrections, 0, (0..n).collect())
}

/// Single-qubit teleportation whose correction also copies the output into
/// an ancilla, so the residue depends on the input.
pub fn leaky_teleportation_rsp<T: Real>() -> Result<ObliviousRsp<T>> {
    let base = teleportation_rsp::<T>(1)?;
    let copy = crate::protocols::gates::cnot_layer::<T>(&[(0, 1)], 2);
    let corrections = base
        .corrections
        .iter()
        .map(|u| copy.compose(&u.tensor(&UnitaryOp::identity(2))))
        .collect::<Result<_>>()?;
    ObliviousRsp::new(1, base.resource, base.projectors, corrections, 1, vec![0])
}

/// Keyed channel from an oblivious RSP.
///
/// Key `m` has probability `p_m`. Alice prepares `σ_m` from a purification
/// (an ancilla pair she discards), lays out `|φ⟩ ⊗ σ_m` in Bob's register
/// order, applies `U_m†` and sends the register. Bob applies `U_m` and keeps
/// the output positions.
pub fn rsp_to_pqc<T: Real>(
    rsp: &ObliviousRsp<T>,
    config: &VerifyConfig<T>,
) -> Result<ChannelProtocol<T>> {
    let profile = rsp.check_oblivious(config)?;
    let n = rsp.n;
    let q = rsp.bob_register();
    let rest = rsp.rest();
    let rq = rest.len();
    let reg = n + 2 * rq;
    let work: Vec<usize> = (n..n + rq).collect();
    let reference: Vec<usize> = (n + rq..reg).collect();
    // Bob-register position r lives at Alice index t[r]
    let mut t = vec![0usize; q];
    for (i, &pos) in rsp.output.iter().enumerate() {
        t[pos] = i;
    }
    for (j, &pos) in rest.iter().enumerate() {
        t[pos] = n + j;
    }

    let mut labels = Vec::new();
    let mut probs = Vec::new();
    let mut alice_ops = Vec::new();
    let mut bob_ops = Vec::new();
    for m in 0..rsp.outcomes() {
        if !profile.occurs[m] {
            continue;
        }
        let correction = &rsp.corrections[m];
        let inverse = correction.adjoint();
        let op = match &profile.residues[m] {
            Some(sigma) => {
                let prep = preparation(sigma)?;
                let prep_targets: Vec<usize> = reference.iter().chain(&work).copied().collect();
                circuit(reg, &[(&prep, prep_targets), (&inverse, t.clone())])?
            }
            None => circuit(reg, &[(&inverse, t.clone())])?,
        };
        labels.push(m.to_string());
        probs.push(profile.probabilities[m]);
        alice_ops.push(op);
        bob_ops.push(correction.clone());
    }
    let total = probs.iter().fold(T::zero(), |a, &p| a + p);
    let probs = probs.into_iter().map(|p| p / total).collect();
    ChannelProtocol::new(ProtocolParts {
        name: "rsp-pqc".into(),
        input_kind: InputKind::Quantum,
        input_qubits: n,
        message_kind: MessageKind::Quantum,
        resource: SharedResource::key(ProbabilityDist::new(labels, probs)?),
        alice_ancillas: 2 * rq,
        bob_ancillas: 0,
        alice_ops,
        message: t,
        bob_ops,
        output: rsp.output.clone(),
    })
}

/// Unitary on `[reference | system]` taking `|0⟩` to a purification of `sigma`.
fn preparation<T: Real>(sigma: &DensityOp<T>) -> Result<UnitaryOp<T>> {
    let psi = purify(sigma);
    let d = psi.dim();
    let cols = complete_basis(&[psi.amplitudes().to_vec()], d);
    let mut m = ComplexMatrix::zeros(d, d);
    for (c, v) in cols.iter().enumerate() {
        m.set_column(c, v);
    }
    UnitaryOp::new(m)
}
