//! Protocol model for private quantum channels, concrete builders, and the
//! security / correctness verifiers.
//!
//! Measurements are deferred: a measured register is rotated into the
//! computational basis and copied into ancillas with CNOTs, so the whole
//! pipeline stays unitary plus partial trace. Keyed protocols are simulated
//! once per key. Security looks at the key-averaged message, correctness is
//! checked key by key.

mod builders;
mod ensemble;
pub mod gates;
mod model;
mod verify;

pub use builders::{
    build_by_name, build_classical_otp, build_epr_keyed_otp, build_quantum_otp, build_superdense,
    build_teleportation, identity_leaky, teleportation_uncorrected, truncated_otp, PROTOCOL_NAMES,
};
pub use ensemble::{EnsembleKind, InputEnsemble, PairProbe};
pub use model::{
    simulation_size, ChannelProtocol, EntangledResource, InputKind, MessageKind, ProtocolParts,
    SharedResource,
};
pub use verify::{
    canonical_ensemble, factorization_deviation, resource_report, verify_correctness,
    verify_security, CorrectnessReport, ResourceReport, SecurityReport, VerifyConfig,
};
