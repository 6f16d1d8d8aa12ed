//! Constructive reductions between protocol classes and the resource-bound
//! audits built on them.

mod audit;
mod lifts;
mod rsp;

pub use audit::{audit_protocol, audit_quantum_input, audit_theorem_main, AuditReport, BoundAudit};
pub use lifts::{
    lift_extra_comm, lift_extra_comm_unchecked, lift_extra_epr, lift_extra_epr_unchecked,
    require_verified_quantum,
};
pub use rsp::{leaky_teleportation_rsp, rsp_to_pqc, teleportation_rsp, ObliviousRsp, RspProfile};
