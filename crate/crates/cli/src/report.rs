use pqchan::entropy::InequalityReport;
use pqchan::protocols::{CorrectnessReport, ResourceReport, SecurityReport};
use pqchan::qmath::ComplexMatrix;
use pqchan::reductions::BoundAudit;
use serde::Serialize;

pub const SCHEMA: u32 = 1;

/// Echo of everything that influenced the run.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub seed: u64,
    pub tol_algebra: f64,
    pub tol_entropy: f64,
    pub random_probes: usize,
    pub samples: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct ProtocolSummary {
    pub name: String,
    pub n: usize,
    /// `builtin` or the descriptor path as given.
    pub source: String,
    /// SHA-256 of the serialized descriptor.
    pub descriptor_sha256: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct SecuritySummary {
    pub deviation: f64,
    pub structured_deviation: f64,
    pub random_deviation: Option<f64>,
    pub off_diagonal: Option<f64>,
    pub factorization: Option<f64>,
    pub message_coherence: Option<f64>,
    pub passed: bool,
}

impl From<&SecurityReport<f64>> for SecuritySummary {
    fn from(s: &SecurityReport<f64>) -> Self {
        SecuritySummary {
            deviation: s.deviation,
            structured_deviation: s.structured_deviation,
            random_deviation: s.random_deviation,
            off_diagonal: s.off_diagonal,
            factorization: s.factorization,
            message_coherence: s.message_coherence,
            passed: s.passed,
        }
    }
}

/// Worst case of one inequality (or identity) over the sampled states.
#[derive(Debug, Clone, Serialize)]
pub struct InequalitySummary {
    pub name: String,
    pub samples: usize,
    /// Smallest slack seen; identities report minus the largest residual.
    pub min_slack: f64,
    pub max_residual: Option<f64>,
    pub worst_sample: usize,
    pub witness: ComplexMatrix<f64>,
    pub passed: bool,
}

impl InequalitySummary {
    pub fn first(r: InequalityReport<f64>, sample: usize) -> Self {
        InequalitySummary {
            name: r.name,
            samples: 1,
            min_slack: r.slack,
            max_residual: r.residual,
            worst_sample: sample,
            witness: r.witness,
            passed: true,
        }
    }

    pub fn absorb(&mut self, r: InequalityReport<f64>, sample: usize) {
        self.samples += 1;
        if r.slack < self.min_slack {
            self.min_slack = r.slack;
            self.max_residual = r.residual;
            self.worst_sample = sample;
            self.witness = r.witness;
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema: u32,
    pub command: String,
    pub config: RunConfig,
    pub protocol: Option<ProtocolSummary>,
    pub security: Option<SecuritySummary>,
    pub correctness: Option<CorrectnessReport<f64>>,
    pub resources: Option<ResourceReport<f64>>,
    pub audits: Vec<BoundAudit<f64>>,
    pub inequalities: Vec<InequalitySummary>,
    pub log: Vec<String>,
    pub pass: bool,
}

impl Report {
    pub fn new(command: &str, config: RunConfig) -> Self {
        Report {
            schema: SCHEMA,
            command: command.to_string(),
            config,
            protocol: None,
            security: None,
            correctness: None,
            resources: None,
            audits: Vec::new(),
            inequalities: Vec::new(),
            log: Vec::new(),
            pass: false,
        }
    }

    /// Overall flag: every component that ran passed.
    pub fn settle(&mut self) {
        self.pass = self.security.as_ref().is_none_or(|s| s.passed)
            && self.correctness.as_ref().is_none_or(|c| c.passed)
            && self.audits.iter().all(|a| a.satisfied)
            && self.inequalities.iter().all(|i| i.passed)
            && !self.log.iter().any(|l| l.starts_with("failed:"));
    }

    /// Every number in the report, for the finiteness check.
    pub fn numbers(&self) -> Vec<f64> {
        let mut out = vec![self.config.tol_algebra, self.config.tol_entropy];
        if let Some(s) = &self.security {
            out.extend([s.deviation, s.structured_deviation]);
            out.extend(
                [
                    s.random_deviation,
                    s.off_diagonal,
                    s.factorization,
                    s.message_coherence,
                ]
                .into_iter()
                .flatten(),
            );
        }
        if let Some(c) = &self.correctness {
            out.push(c.deviation);
        }
        if let Some(r) = &self.resources {
            out.push(r.comm);
            out.extend(r.key_entropy);
            out.extend(r.entanglement);
        }
        for a in &self.audits {
            out.extend([a.measured, a.bound, a.slack]);
        }
        for i in &self.inequalities {
            out.push(i.min_slack);
            out.extend(i.max_residual);
        }
        out
    }
}
