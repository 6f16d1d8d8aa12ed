use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{bail, Context, Result};
use pqchan::entropy::{check_fact1, check_lemma3, check_mutual_information_identity};
use pqchan::protocols::{
    build_by_name, canonical_ensemble, resource_report, verify_correctness, verify_security,
    VerifyConfig,
};
use pqchan::qmath::{random_density, seeded_rng, SystemLayout};
use pqchan::reductions::audit_protocol;
use pqchan::{ChannelProtocol64, Error, Tolerances64};
use sha2::{Digest, Sha256};

use crate::report::{InequalitySummary, ProtocolSummary, Report, RunConfig, SecuritySummary};

/// Default `n` when a protocol is named without one.
pub fn default_n(name: &str) -> usize {
    if name == "superdense" {
        2
    } else {
        1
    }
}

pub struct Loaded {
    pub protocol: ChannelProtocol64,
    pub summary: ProtocolSummary,
}

/// Resolves a protocol name, or a path to a JSON descriptor.
pub fn load(target: &str, n: Option<usize>) -> Result<Loaded> {
    let path = Path::new(target);
    let (protocol, source) = if path.is_file() {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {target}"))?;
        let p: ChannelProtocol64 = serde_json::from_str(&text)
            .with_context(|| format!("malformed descriptor {target}"))?;
        if let Some(n) = n {
            if n != p.input_qubits() {
                bail!(
                    "--n {n} conflicts with the descriptor's {} input qubits",
                    p.input_qubits()
                );
            }
        }
        (p, target.to_string())
    } else {
        let n = n.unwrap_or_else(|| default_n(target));
        (build_by_name(target, n)?, "builtin".to_string())
    };
    let bytes = serde_json::to_vec(&protocol)?;
    let summary = ProtocolSummary {
        name: protocol.name().to_string(),
        n: protocol.input_qubits(),
        source,
        descriptor_sha256: hex::encode(Sha256::digest(&bytes)),
    };
    Ok(Loaded { protocol, summary })
}

pub fn verify_config(config: &RunConfig) -> Result<VerifyConfig<f64>> {
    if !(config.tol_algebra > 0.0 && config.tol_entropy > 0.0) {
        bail!("tolerances must be positive");
    }
    if !(config.tol_algebra.is_finite() && config.tol_entropy.is_finite()) {
        bail!("tolerances must be finite");
    }
    let tolerances = Tolerances64::default()
        .with_algebra(config.tol_algebra)
        .with_entropy(config.tol_entropy);
    Ok(VerifyConfig {
        tolerances,
        random_probes: config.random_probes,
        seed: config.seed,
        ..VerifyConfig::default()
    })
}

/// Security, correctness and resource report for one protocol.
pub fn verify(target: &str, n: Option<usize>, config: RunConfig) -> Result<Report> {
    let cfg = verify_config(&config)?;
    let loaded = load(target, n)?;
    let mut report = Report::new("verify", config);
    run_verifiers(&loaded, &cfg, &mut report)?;
    report.protocol = Some(loaded.summary);
    report.settle();
    Ok(report)
}

fn run_verifiers(loaded: &Loaded, cfg: &VerifyConfig<f64>, report: &mut Report) -> Result<()> {
    let p = &loaded.protocol;
    let ensemble = canonical_ensemble(p, cfg)?;
    let security = verify_security(p, &ensemble, cfg)?;
    let correctness = verify_correctness(p, &ensemble, cfg)?;
    report.log.push(format!(
        "checked `{}` on {} probes",
        p.name(),
        ensemble.len()
    ));
    report.security = Some(SecuritySummary::from(&security));
    report.correctness = Some(correctness);
    report.resources = Some(resource_report(p)?);
    Ok(())
}

/// Verification followed by the lower-bound audit.
pub fn audit(target: &str, n: Option<usize>, config: RunConfig) -> Result<Report> {
    let cfg = verify_config(&config)?;
    let loaded = load(target, n)?;
    let mut report = Report::new("audit", config);
    run_verifiers(&loaded, &cfg, &mut report)?;
    match audit_protocol(&loaded.protocol, &cfg) {
        Ok(a) => {
            report.audits = a.audits;
            report.log.extend(a.log);
        }
        Err(Error::UnverifiedProtocol(why)) => {
            report.log.push(format!("failed: audit not run, {why}"));
        }
        Err(e) => return Err(e.into()),
    }
    report.protocol = Some(loaded.summary);
    report.settle();
    Ok(report)
}

/// Worst slack per inequality over seeded random states.
pub fn inequalities(config: RunConfig) -> Result<Report> {
    let cfg = verify_config(&config)?;
    if config.samples == 0 {
        bail!("--samples must be at least 1");
    }
    let tol = cfg.tolerances;
    let mut rng = seeded_rng(config.seed);
    let mut table: BTreeMap<String, InequalitySummary> = BTreeMap::new();
    let mut absorb =
        |r: pqchan::entropy::InequalityReport<f64>, k: usize| match table.get_mut(&r.name) {
            Some(s) => s.absorb(r, k),
            None => {
                table.insert(r.name.clone(), InequalitySummary::first(r, k));
            }
        };
    let triple = SystemLayout::qubits(3);
    let groups = vec![vec![0], vec![1], vec![2]];
    for k in 0..config.samples {
        let rho = random_density::<f64, _>(&triple, &mut rng);
        for r in check_fact1(&rho, &groups, false)? {
            absorb(r, k);
        }
        for r in check_lemma3(&rho, &[0], &[1], &[2], false)? {
            absorb(r, k);
        }
    }
    let pair = SystemLayout::qubits(2);
    for k in 0..config.samples {
        let rho = random_density::<f64, _>(&pair, &mut rng);
        absorb(check_mutual_information_identity(&rho, &[0], &[1])?, k);
    }
    let mut report = Report::new("inequalities", config);
    report.log.push(format!(
        "sampled {} tripartite and {} bipartite states",
        report.config.samples, report.config.samples
    ));
    for (_, mut s) in table {
        // the relative-entropy identity is held to the entropy tolerance
        let limit = if s.name.starts_with("mutual_information") {
            tol.entropy
        } else {
            tol.inequality
        };
        s.passed = s.min_slack >= -limit;
        report.inequalities.push(s);
    }
    report.settle();
    Ok(report)
}
