use serde::{Deserialize, Serialize};

use super::lifts::{lift_extra_comm_unchecked, lift_extra_epr_unchecked, require_verified};
use crate::error::{Error, Result};
use crate::protocols::{resource_report, ChannelProtocol, InputKind, MessageKind, VerifyConfig};
use crate::scalar::Real;

/// One lower bound checked against a measured resource.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct BoundAudit<T: Real> {
    /// Protocol the quantity was measured on.
    pub protocol: String,
    /// `comm_entropy`, `key_entropy`, `entanglement` or `shared_resource`.
    pub quantity: String,
    pub measured: T,
    pub bound: T,
    pub slack: T,
    pub satisfied: bool,
}

impl<T: Real> BoundAudit<T> {
    pub fn new(protocol: &str, quantity: &str, measured: T, bound: T, tol: T) -> Self {
        BoundAudit {
            protocol: protocol.to_string(),
            quantity: quantity.to_string(),
            measured,
            bound,
            slack: measured - bound,
            satisfied: measured >= bound - tol,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct AuditReport<T: Real> {
    pub audits: Vec<BoundAudit<T>>,
    /// What was built and verified along the way.
    pub log: Vec<String>,
}

impl<T: Real> AuditReport<T> {
    pub fn all_satisfied(&self) -> bool {
        self.audits.iter().all(|a| a.satisfied)
    }

    fn extend(&mut self, other: AuditReport<T>) {
        self.audits.extend(other.audits);
        self.log.extend(other.log);
    }
}

/// Lower bounds for a verified classical-input protocol on `n` bits.
///
/// Shared key only: key and communication entropy at least `n`. Shared
/// entanglement only: at least `n` with a classical message, `n/2` with a
/// quantum one. Both or neither: the key entropy plus entanglement is held
/// to the entanglement bound.
pub fn audit_theorem_main<T: Real>(
    p: &ChannelProtocol<T>,
    config: &VerifyConfig<T>,
) -> Result<AuditReport<T>> {
    if p.input_kind() != InputKind::Classical {
        return Err(Error::InvalidProtocol(format!(
            "`{}` does not take classical input",
            p.name()
        )));
    }
    require_verified(p, config)?;
    let r = resource_report(p)?;
    let tol = config.tolerances.entropy;
    let n = T::lit(p.input_qubits() as f64);
    let classical_message = p.message_kind() == MessageKind::Classical;
    let strong = classical_message || r.entanglement.is_none();
    let bound = if strong { n } else { n * T::lit(0.5) };
    let name = p.name();
    let resource = match (r.key_entropy, r.entanglement) {
        (Some(k), None) => BoundAudit::new(name, "key_entropy", k, n, tol),
        (None, Some(e)) => BoundAudit::new(name, "entanglement", e, bound, tol),
        (k, e) => {
            let total = k.unwrap_or(T::zero()) + e.unwrap_or(T::zero());
            BoundAudit::new(name, "shared_resource", total, bound, tol)
        }
    };
    let comm = BoundAudit::new(name, "comm_entropy", r.comm, bound, tol);
    Ok(AuditReport {
        audits: vec![resource, comm],
        log: vec![format!(
            "verified `{name}` on all {} basis inputs",
            1usize << p.input_qubits()
        )],
    })
}

/// Quantum-input bounds, measured on lifted `2n`-bit protocols and reported
/// for the original one.
///
/// A keyed protocol is lifted with extra communication: the lift keeps the
/// key, so key entropy `≥ 2n`, and its message is `(I/2^n) ⊗ ρ`, so
/// communication `≥ 2n` means `S(ρ) ≥ n`. An entangled protocol with a
/// classical message is lifted with extra EPR pairs, which keeps the message
/// and adds `n` ebits. With a quantum message both lifts are needed. The
/// exact `n` a lift adds is taken off both sides, so slacks are unchanged.
pub fn audit_quantum_input<T: Real>(
    p: &ChannelProtocol<T>,
    config: &VerifyConfig<T>,
) -> Result<AuditReport<T>> {
    if p.input_kind() != InputKind::Quantum {
        return Err(Error::InvalidProtocol(format!(
            "`{}` does not take quantum input",
            p.name()
        )));
    }
    require_verified(p, config)?;
    let tol = config.tolerances.entropy;
    let mut report = AuditReport {
        audits: Vec::new(),
        log: vec![format!(
            "verified `{}` on the quantum probe ensemble",
            p.name()
        )],
    };
    let n = T::lit(p.input_qubits() as f64);
    let entangled_only = p.resource().entangled.is_some() && p.resource().key.is_none();
    if entangled_only {
        let lifted = lift_extra_epr_unchecked(p)?;
        report.log.push(format!("built `{}`", lifted.name()));
        let mut sub = audit_theorem_main(&lifted, config)?;
        restate(
            &mut sub,
            p.name(),
            &["entanglement", "shared_resource"],
            n,
            tol,
        );
        if p.message_kind() == MessageKind::Classical {
            report.extend(sub);
        } else {
            let comm_lift = lift_extra_comm_unchecked(p)?;
            report.log.push(format!("built `{}`", comm_lift.name()));
            let mut other = audit_theorem_main(&comm_lift, config)?;
            other.audits.retain(|a| a.quantity != "comm_entropy");
            restate(&mut other, p.name(), &[], n, tol);
            report.log.extend(sub.log);
            report.audits.extend(
                sub.audits
                    .into_iter()
                    .filter(|a| a.quantity == "comm_entropy"),
            );
            report.extend(other);
        }
    } else {
        let lifted = lift_extra_comm_unchecked(p)?;
        report.log.push(format!("built `{}`", lifted.name()));
        let mut sub = audit_theorem_main(&lifted, config)?;
        restate(&mut sub, p.name(), &["comm_entropy"], n, tol);
        report.extend(sub);
    }
    Ok(report)
}

/// Moves audits of a lifted protocol onto `original`, taking `shift` off the
/// measured value and the bound of each quantity in `shifted`.
fn restate<T: Real>(
    report: &mut AuditReport<T>,
    original: &str,
    shifted: &[&str],
    shift: T,
    tol: T,
) {
    for a in &mut report.audits {
        let by = if shifted.contains(&a.quantity.as_str()) {
            shift
        } else {
            T::zero()
        };
        report.log.push(format!(
            "{} of `{}` restated for `{original}`",
            a.quantity, a.protocol
        ));
        *a = BoundAudit::new(original, &a.quantity, a.measured - by, a.bound - by, tol);
    }
}

/// Runs the audit matching the protocol's input kind.
pub fn audit_protocol<T: Real>(
    p: &ChannelProtocol<T>,
    config: &VerifyConfig<T>,
) -> Result<AuditReport<T>> {
    match p.input_kind() {
        InputKind::Classical => audit_theorem_main(p, config),
        InputKind::Quantum => audit_quantum_input(p, config),
    }
}
