use serde::{Deserialize, Serialize};

use crate::entropy::ProbabilityDist;
use crate::error::{Error, Result};
use crate::qmath::{partial_trace_outer, ComplexMatrix, DensityOp, Ket, SystemLayout, UnitaryOp};
use crate::scalar::Real;
use crate::tolerance::Tolerances;
use crate::MAX_DIMENSION;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InputKind {
    Classical,
    Quantum,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MessageKind {
    Classical,
    Quantum,
}

/// Shared pure state; the first `alice_qubits` qubits are Alice's half.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct EntangledResource<T: Real> {
    pub state: Ket<T>,
    pub alice_qubits: usize,
}

impl<T: Real> EntangledResource<T> {
    pub fn bob_qubits(&self) -> usize {
        self.state.layout().len() - self.alice_qubits
    }

    fn validate(&self) -> Result<()> {
        let layout = self.state.layout();
        if layout.dims().iter().any(|&d| d != 2) {
            return Err(Error::InvalidProtocol(
                "resource state must be on qubits".into(),
            ));
        }
        if self.state.amplitudes().len() != layout.total_dim() {
            return Err(Error::DimensionMismatch {
                expected: layout.total_dim(),
                actual: self.state.amplitudes().len(),
            });
        }
        if self.alice_qubits == 0 || self.alice_qubits >= layout.len() {
            return Err(Error::InvalidProtocol(format!(
                "resource cut at {} of {} qubits leaves a side empty",
                self.alice_qubits,
                layout.len()
            )));
        }
        let norm = self.state.norm();
        if (norm - T::one()).abs() > Tolerances::<T>::default().algebra {
            return Err(Error::InvalidState(format!(
                "resource norm {} differs from 1",
                norm.as_f64()
            )));
        }
        Ok(())
    }
}

/// Shared key, shared entanglement, both, or neither.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct SharedResource<T: Real> {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub key: Option<ProbabilityDist<T>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub entangled: Option<EntangledResource<T>>,
}

impl<T: Real> SharedResource<T> {
    pub fn none() -> Self {
        SharedResource {
            key: None,
            entangled: None,
        }
    }

    pub fn key(dist: ProbabilityDist<T>) -> Self {
        SharedResource {
            key: Some(dist),
            entangled: None,
        }
    }

    pub fn entangled(state: Ket<T>, alice_qubits: usize) -> Self {
        SharedResource {
            key: None,
            entangled: Some(EntangledResource {
                state,
                alice_qubits,
            }),
        }
    }

    fn alice_qubits(&self) -> usize {
        self.entangled.as_ref().map_or(0, |e| e.alice_qubits)
    }

    fn bob_qubits(&self) -> usize {
        self.entangled.as_ref().map_or(0, |e| e.bob_qubits())
    }
}

/// Unvalidated protocol fields; also the JSON descriptor shape.
///
/// Alice's register is `[input | alice ancillas | Alice resource half]`,
/// Bob's is `[message (listed order) | bob ancillas | Bob resource half]`.
/// Operator lists hold either one operator per key or a single operator used
/// for every key.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct ProtocolParts<T: Real> {
    pub name: String,
    pub input_kind: InputKind,
    pub input_qubits: usize,
    pub message_kind: MessageKind,
    pub resource: SharedResource<T>,
    #[serde(default)]
    pub alice_ancillas: usize,
    #[serde(default)]
    pub bob_ancillas: usize,
    pub alice_ops: Vec<UnitaryOp<T>>,
    pub message: Vec<usize>,
    pub bob_ops: Vec<UnitaryOp<T>>,
    pub output: Vec<usize>,
}

/// Validated one-way protocol using shared randomness and/or entanglement.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "", try_from = "ProtocolParts<T>", into = "ProtocolParts<T>")]
pub struct ChannelProtocol<T: Real> {
    parts: ProtocolParts<T>,
}

impl<T: Real> TryFrom<ProtocolParts<T>> for ChannelProtocol<T> {
    type Error = Error;

    fn try_from(parts: ProtocolParts<T>) -> Result<Self> {
        ChannelProtocol::new(parts)
    }
}

impl<T: Real> From<ChannelProtocol<T>> for ProtocolParts<T> {
    fn from(p: ChannelProtocol<T>) -> Self {
        p.parts
    }
}

impl<T: Real> ChannelProtocol<T> {
    pub fn new(parts: ProtocolParts<T>) -> Result<Self> {
        validate(&parts)?;
        Ok(ChannelProtocol { parts })
    }

    pub fn parts(&self) -> &ProtocolParts<T> {
        &self.parts
    }

    pub fn into_parts(self) -> ProtocolParts<T> {
        self.parts
    }

    pub fn name(&self) -> &str {
        &self.parts.name
    }

    pub fn input_kind(&self) -> InputKind {
        self.parts.input_kind
    }

    pub fn input_qubits(&self) -> usize {
        self.parts.input_qubits
    }

    pub fn message_kind(&self) -> MessageKind {
        self.parts.message_kind
    }

    pub fn resource(&self) -> &SharedResource<T> {
        &self.parts.resource
    }

    pub fn alice_ancillas(&self) -> usize {
        self.parts.alice_ancillas
    }

    pub fn bob_ancillas(&self) -> usize {
        self.parts.bob_ancillas
    }

    pub fn alice_ops(&self) -> &[UnitaryOp<T>] {
        &self.parts.alice_ops
    }

    pub fn bob_ops(&self) -> &[UnitaryOp<T>] {
        &self.parts.bob_ops
    }

    pub fn message(&self) -> &[usize] {
        &self.parts.message
    }

    pub fn output(&self) -> &[usize] {
        &self.parts.output
    }

    /// Same protocol with a different input kind label.
    pub fn with_input_kind(&self, kind: InputKind) -> Self {
        let mut parts = self.parts.clone();
        parts.input_kind = kind;
        ChannelProtocol { parts }
    }

    pub fn alice_register_qubits(&self) -> usize {
        alice_register(&self.parts)
    }

    pub fn bob_register_qubits(&self) -> usize {
        bob_register(&self.parts)
    }

    /// Qubits alive during decoding: both registers minus the message.
    pub fn total_qubits(&self) -> usize {
        total_qubits(&self.parts)
    }

    /// Number of key values (1 without a classical key).
    pub fn key_count(&self) -> usize {
        self.parts.resource.key.as_ref().map_or(1, |k| k.len())
    }

    /// `(key index, probability)` for every key with nonzero weight.
    pub fn keys(&self) -> Vec<(usize, T)> {
        match &self.parts.resource.key {
            Some(dist) => dist
                .probs()
                .iter()
                .copied()
                .enumerate()
                .filter(|(_, p)| *p > T::zero())
                .collect(),
            None => vec![(0, T::one())],
        }
    }

    pub fn alice_op(&self, key: usize) -> &UnitaryOp<T> {
        pick(&self.parts.alice_ops, key)
    }

    pub fn bob_op(&self, key: usize) -> &UnitaryOp<T> {
        pick(&self.parts.bob_ops, key)
    }

    pub fn message_layout(&self) -> SystemLayout {
        SystemLayout::qubits(self.parts.message.len())
    }

    pub fn output_layout(&self) -> SystemLayout {
        SystemLayout::qubits(self.parts.input_qubits)
    }

    fn check_input(&self, input: &Ket<T>) -> Result<()> {
        let expected = 1usize << self.parts.input_qubits;
        if input.dim() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                actual: input.dim(),
            });
        }
        Ok(())
    }

    /// Joint state `[input | alice anc | resA | resB]` after Alice's key-`key` operation.
    pub fn alice_state(&self, input: &Ket<T>, key: usize) -> Result<Ket<T>> {
        self.check_input(input)?;
        let p = &self.parts;
        let input = as_qubits(input, p.input_qubits)?;
        let mut state = input;
        if p.alice_ancillas > 0 {
            state = state.tensor(&Ket::zeros(SystemLayout::qubits(p.alice_ancillas)));
        }
        if let Some(e) = &p.resource.entangled {
            state = state.tensor(&as_qubits(&e.state, e.state.layout().len())?);
        }
        let targets: Vec<usize> = (0..alice_register(p)).collect();
        state.apply(self.alice_op(key).matrix(), &targets)
    }

    /// Message operator `Tr_rest(U|a⟩⟨b|U†)` for key `key`; linear in `|a⟩⟨b|`.
    pub fn encode_operator_key(
        &self,
        a: &Ket<T>,
        b: &Ket<T>,
        key: usize,
    ) -> Result<ComplexMatrix<T>> {
        let sa = self.alice_state(a, key)?;
        if std::ptr::eq(a, b) {
            return partial_trace_outer(&sa, &sa, &self.parts.message);
        }
        let sb = self.alice_state(b, key)?;
        partial_trace_outer(&sa, &sb, &self.parts.message)
    }

    /// Key-averaged message operator `E(|a⟩⟨b|)`.
    pub fn encode_operator(&self, a: &Ket<T>, b: &Ket<T>) -> Result<ComplexMatrix<T>> {
        let d = 1usize << self.parts.message.len();
        let mut acc = ComplexMatrix::zeros(d, d);
        for (key, p) in self.keys() {
            acc = &acc + &self.encode_operator_key(a, b, key)?.scale_real(p);
        }
        Ok(acc)
    }

    /// Message state for one key value.
    pub fn encode_key(&self, input: &Ket<T>, key: usize) -> Result<DensityOp<T>> {
        let m = self.encode_operator_key(input, input, key)?;
        Ok(DensityOp::from_parts(self.message_layout(), m))
    }

    /// Eavesdropper's view: message state averaged over the key.
    pub fn encode(&self, input: &Ket<T>) -> Result<DensityOp<T>> {
        let m = self.encode_operator(input, input)?;
        Ok(DensityOp::from_parts(self.message_layout(), m))
    }

    /// Bob's output when both parties hold key `key`.
    pub fn decode_key(&self, input: &Ket<T>, key: usize) -> Result<DensityOp<T>> {
        let p = &self.parts;
        let mut state = self.alice_state(input, key)?;
        let global = state.layout().len();
        if p.bob_ancillas > 0 {
            state = state.tensor(&Ket::zeros(SystemLayout::qubits(p.bob_ancillas)));
        }
        let res_b_start = alice_register(p);
        let bob_reg: Vec<usize> = p
            .message
            .iter()
            .copied()
            .chain(global..global + p.bob_ancillas)
            .chain(res_b_start..global)
            .collect();
        let state = state.apply(self.bob_op(key).matrix(), &bob_reg)?;
        let out: Vec<usize> = p.output.iter().map(|&i| bob_reg[i]).collect();
        let m = partial_trace_outer(&state, &state, &out)?;
        Ok(DensityOp::from_parts(self.output_layout(), m))
    }

    /// Key-averaged decoded output.
    pub fn decode(&self, input: &Ket<T>) -> Result<DensityOp<T>> {
        let d = 1usize << self.parts.input_qubits;
        let mut acc = ComplexMatrix::zeros(d, d);
        for (key, p) in self.keys() {
            acc = &acc + &self.decode_key(input, key)?.matrix().scale_real(p);
        }
        Ok(DensityOp::from_parts(self.output_layout(), acc))
    }

    /// Distribution of the computational-basis reading of the message,
    /// labelled by bit strings.
    pub fn message_distribution(&self, input: &Ket<T>) -> Result<ProbabilityDist<T>> {
        let rho = self.encode(input)?;
        let m = self.parts.message.len();
        let labels = (0..rho.dim())
            .map(|i| super::gates::bit_label(i, m))
            .collect();
        let probs = rho
            .matrix()
            .real_diagonal()
            .into_iter()
            .map(|p| p.max(T::zero()))
            .collect::<Vec<_>>();
        let total = probs.iter().fold(T::zero(), |a, &p| a + p);
        ProbabilityDist::new(labels, probs.into_iter().map(|p| p / total).collect())
    }
}

fn pick<T: Real>(ops: &[UnitaryOp<T>], key: usize) -> &UnitaryOp<T> {
    if ops.len() == 1 {
        &ops[0]
    } else {
        &ops[key]
    }
}

/// Relabels a ket's layout as `n` qubits (dimensions must agree).
fn as_qubits<T: Real>(ket: &Ket<T>, n: usize) -> Result<Ket<T>> {
    if ket.layout().dims().iter().all(|&d| d == 2) && ket.layout().len() == n {
        return Ok(ket.clone());
    }
    Ket::new(SystemLayout::qubits(n), ket.amplitudes().to_vec())
}

fn alice_register<T: Real>(p: &ProtocolParts<T>) -> usize {
    p.input_qubits + p.alice_ancillas + p.resource.alice_qubits()
}

fn bob_register<T: Real>(p: &ProtocolParts<T>) -> usize {
    p.message.len() + p.bob_ancillas + p.resource.bob_qubits()
}

fn total_qubits<T: Real>(p: &ProtocolParts<T>) -> usize {
    alice_register(p) + p.resource.bob_qubits() + p.bob_ancillas
}

/// Joint simulation size: state dimension times the number of key runs.
pub fn simulation_size<T: Real>(p: &ProtocolParts<T>) -> Option<usize> {
    let keys = p.resource.key.as_ref().map_or(1, |k| k.len());
    let q = total_qubits(p);
    if q >= usize::BITS as usize - 1 {
        return None;
    }
    (1usize << q).checked_mul(keys)
}

pub(crate) fn check_dimension<T: Real>(p: &ProtocolParts<T>) -> Result<()> {
    match simulation_size(p) {
        Some(size) if size <= MAX_DIMENSION => Ok(()),
        size => Err(Error::DimensionLimit {
            dimension: size.unwrap_or(usize::MAX),
            limit: MAX_DIMENSION,
        }),
    }
}

fn check_distinct(what: &str, indices: &[usize], bound: usize) -> Result<()> {
    let mut seen = vec![false; bound];
    for &i in indices {
        if i >= bound {
            return Err(Error::InvalidProtocol(format!(
                "{what} index {i} outside a register of {bound} qubits"
            )));
        }
        if std::mem::replace(&mut seen[i], true) {
            return Err(Error::InvalidProtocol(format!("{what} index {i} repeated")));
        }
    }
    Ok(())
}

fn check_ops<T: Real>(who: &str, ops: &[UnitaryOp<T>], keys: usize, qubits: usize) -> Result<()> {
    if ops.len() != 1 && ops.len() != keys {
        return Err(Error::InvalidProtocol(format!(
            "{who} has {} operators for {keys} keys",
            ops.len()
        )));
    }
    let dim = 1usize << qubits;
    let tol = Tolerances::<T>::default().algebra;
    for op in ops {
        if op.matrix().rows() != dim || op.matrix().cols() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                actual: op.matrix().rows(),
            });
        }
        let err = op.unitarity_error();
        if err.is_nan() || err > tol {
            return Err(Error::NotUnitary {
                deviation: err.as_f64(),
            });
        }
    }
    Ok(())
}

fn validate<T: Real>(p: &ProtocolParts<T>) -> Result<()> {
    if p.input_qubits == 0 {
        return Err(Error::InvalidN {
            n: 0,
            reason: "a protocol needs at least one input qubit".into(),
        });
    }
    if let Some(e) = &p.resource.entangled {
        e.validate()?;
    }
    check_dimension(p)?;
    let keys = p.resource.key.as_ref().map_or(1, |k| k.len());
    let ra = alice_register(p);
    let rb = bob_register(p);
    if p.message.is_empty() {
        return Err(Error::InvalidProtocol("empty message".into()));
    }
    check_distinct("message", &p.message, ra)?;
    check_distinct("output", &p.output, rb)?;
    if p.output.len() != p.input_qubits {
        return Err(Error::InvalidProtocol(format!(
            "{} output qubits for {} input qubits",
            p.output.len(),
            p.input_qubits
        )));
    }
    check_ops("alice", &p.alice_ops, keys, ra)?;
    check_ops("bob", &p.bob_ops, keys, rb)?;
    Ok(())
}
