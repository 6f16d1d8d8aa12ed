//! Checkers for the entropy inequalities behind the resource lower bounds.
//!
//! Every report carries a `slack` oriented so that `slack ≥ 0` means the
//! inequality holds. Identities (the chain rule, the mutual-information /
//! relative-entropy equality) report `residual = |LHS − RHS|` and
//! `slack = −residual`.

use serde::{Deserialize, Serialize};

use super::{
    check_disjoint, classical_deviation, entropy_of, mutual_information, relative_entropy, union,
};
use crate::error::{Error, Result};
use crate::qmath::{partial_trace, ComplexMatrix, DensityOp};
use crate::scalar::Real;
use crate::tolerance::Tolerances;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct InequalityReport<T: Real> {
    pub name: String,
    pub slack: T,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residual: Option<T>,
    /// The (reduced) state the quantities were evaluated on.
    pub witness: ComplexMatrix<T>,
}

impl<T: Real> InequalityReport<T> {
    fn inequality(name: &str, slack: T, witness: &DensityOp<T>) -> Self {
        InequalityReport {
            name: name.to_string(),
            slack,
            residual: None,
            witness: witness.matrix().clone(),
        }
    }

    fn identity(name: &str, residual: T, witness: &DensityOp<T>) -> Self {
        let residual = residual.abs();
        InequalityReport {
            name: name.to_string(),
            slack: -residual,
            residual: Some(residual),
            witness: witness.matrix().clone(),
        }
    }

    pub fn holds(&self, tol: T) -> bool {
        self.slack.is_finite() && self.slack >= -tol
    }
}

/// Individual parts of the entropy fact list, with their group arity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fact1Part {
    /// `S(A) + S(B) − S(AB) ≥ 0`
    Subadditivity,
    /// `S(AB) + S(AC) − S(ABC) − S(A) ≥ 0`
    StrongSubadditivity,
    /// `I(A:BC) = I(A:B) + I(AB:C) − I(B:C)`
    ChainRule,
    /// `S(AB) ≥ |S(A) − S(B)|`
    ArakiLieb,
    /// `S(AB) ≥ max{S(A), S(B)}` for classical `A`
    ClassicalConditioning,
}

impl Fact1Part {
    pub fn arity(self) -> usize {
        match self {
            Fact1Part::StrongSubadditivity | Fact1Part::ChainRule => 3,
            _ => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Fact1Part::Subadditivity => "subadditivity",
            Fact1Part::StrongSubadditivity => "strong_subadditivity",
            Fact1Part::ChainRule => "chain_rule_residual",
            Fact1Part::ArakiLieb => "araki_lieb",
            Fact1Part::ClassicalConditioning => "classical_conditioning",
        }
    }

    /// Evaluates this part on `groups` (labelled A, B, C by position).
    pub fn check<T: Real>(
        self,
        rho: &DensityOp<T>,
        groups: &[Vec<usize>],
    ) -> Result<InequalityReport<T>> {
        if groups.len() < self.arity() {
            return Err(Error::GroupArity(format!(
                "{} needs {} groups, got {}",
                self.name(),
                self.arity(),
                groups.len()
            )));
        }
        let refs: Vec<&[usize]> = groups.iter().map(Vec::as_slice).collect();
        check_disjoint(&refs)?;
        let all = refs.iter().fold(Vec::new(), |acc, g| union(&acc, g));
        rho.layout().check_indices(&all)?;
        let witness = reduce_to(rho, &all)?;
        // indices relative to the reduced witness
        let rel = |g: &[usize]| -> Vec<usize> {
            g.iter()
                .map(|i| all.iter().position(|j| j == i).expect("member of union"))
                .collect()
        };
        let a = rel(&groups[0]);
        let b = rel(&groups[1]);
        let s = |g: &[usize]| entropy_of(&witness, g);
        let report = match self {
            Fact1Part::Subadditivity => {
                let slack = s(&a)? + s(&b)? - s(&union(&a, &b))?;
                InequalityReport::inequality(self.name(), slack, &witness)
            }
            Fact1Part::ArakiLieb => {
                let (sa, sb) = (s(&a)?, s(&b)?);
                let slack = s(&union(&a, &b))? - (sa - sb).abs();
                InequalityReport::inequality(self.name(), slack, &witness)
            }
            Fact1Part::ClassicalConditioning => {
                let dev = classical_deviation(&witness, &a)?;
                if dev > Tolerances::<T>::default().classical {
                    return Err(Error::NotClassical {
                        group: "A".into(),
                        off_diagonal: dev.as_f64(),
                    });
                }
                let slack = s(&union(&a, &b))? - s(&a)?.max(s(&b)?);
                InequalityReport::inequality(self.name(), slack, &witness)
            }
            Fact1Part::StrongSubadditivity => {
                let c = rel(&groups[2]);
                let slack = s(&union(&a, &b))? + s(&union(&a, &c))?
                    - s(&union(&union(&a, &b), &c))?
                    - s(&a)?;
                InequalityReport::inequality(self.name(), slack, &witness)
            }
            Fact1Part::ChainRule => {
                let c = rel(&groups[2]);
                let mi = |x: &[usize], y: &[usize]| mutual_information(&witness, x, y);
                let residual =
                    mi(&a, &union(&b, &c))? - mi(&a, &b)? - mi(&union(&a, &b), &c)? + mi(&b, &c)?;
                InequalityReport::identity(self.name(), residual, &witness)
            }
        };
        Ok(report)
    }
}

fn reduce_to<T: Real>(rho: &DensityOp<T>, keep: &[usize]) -> Result<DensityOp<T>> {
    if keep.len() == rho.layout().len() {
        Ok(rho.clone())
    } else {
        partial_trace(rho, keep)
    }
}

/// Runs every applicable part for 2 or 3 groups; the classical-conditioning
/// part only when `a_classical` is asserted (and then verified).
pub fn check_fact1<T: Real>(
    rho: &DensityOp<T>,
    groups: &[Vec<usize>],
    a_classical: bool,
) -> Result<Vec<InequalityReport<T>>> {
    let parts: &[Fact1Part] = match groups.len() {
        2 => &[Fact1Part::Subadditivity, Fact1Part::ArakiLieb],
        3 => &[
            Fact1Part::Subadditivity,
            Fact1Part::StrongSubadditivity,
            Fact1Part::ChainRule,
            Fact1Part::ArakiLieb,
        ],
        n => {
            return Err(Error::GroupArity(format!(
                "expected 2 or 3 groups, got {n}"
            )))
        }
    };
    let mut reports = parts
        .iter()
        .map(|p| p.check(rho, groups))
        .collect::<Result<Vec<_>>>()?;
    if a_classical {
        reports.push(Fact1Part::ClassicalConditioning.check(rho, groups)?);
    }
    Ok(reports)
}

/// `|I(A:B) − S(ρ^{AB} ‖ ρ^A ⊗ ρ^B)|` as an identity report.
pub fn check_mutual_information_identity<T: Real>(
    rho: &DensityOp<T>,
    group_a: &[usize],
    group_b: &[usize],
) -> Result<InequalityReport<T>> {
    check_disjoint(&[group_a, group_b])?;
    let all = union(group_a, group_b);
    let witness = reduce_to(rho, &all)?;
    let pos = |g: &[usize]| -> Vec<usize> {
        g.iter()
            .map(|i| all.iter().position(|j| j == i).expect("member"))
            .collect()
    };
    let (a, b) = (pos(group_a), pos(group_b));
    // product of marginals laid out as (A-sorted, B-sorted), then permuted back
    let mut a_sorted = a.clone();
    a_sorted.sort_unstable();
    let mut b_sorted = b.clone();
    b_sorted.sort_unstable();
    let product = partial_trace(&witness, &a_sorted)?.tensor(&partial_trace(&witness, &b_sorted)?);
    let order: Vec<usize> = a_sorted.iter().chain(&b_sorted).copied().collect();
    let mut inverse = vec![0; order.len()];
    for (k, &o) in order.iter().enumerate() {
        inverse[o] = k;
    }
    let product = product.permute(&inverse)?;
    let mi = mutual_information(&witness, &a, &b)?;
    let rel = relative_entropy(&witness, &product)?;
    Ok(InequalityReport::identity(
        "mutual_information_relative_entropy_residual",
        mi - rel,
        &witness,
    ))
}

/// Reports for parts 1 and 3 of the tripartite bound lemma, plus part 2 when
/// `a_classical` is asserted (verified: `AX` diagonal on those factors).
/// `group_x` may be empty, meaning a trivial system.
pub fn check_lemma3<T: Real>(
    rho: &DensityOp<T>,
    group_a: &[usize],
    group_b: &[usize],
    group_x: &[usize],
    a_classical: bool,
) -> Result<Vec<InequalityReport<T>>> {
    check_disjoint(&[group_a, group_b, group_x])?;
    let all = union(&union(group_a, group_b), group_x);
    rho.layout().check_indices(&all)?;
    if group_a.is_empty() || group_b.is_empty() {
        return Err(Error::GroupArity("groups A and B must be nonempty".into()));
    }
    let witness = reduce_to(rho, &all)?;
    let rel = |g: &[usize]| -> Vec<usize> {
        g.iter()
            .map(|i| all.iter().position(|j| j == i).expect("member"))
            .collect()
    };
    let (a, b, x) = (rel(group_a), rel(group_b), rel(group_x));
    let s = |g: &[usize]| entropy_of(&witness, g);
    let (sa, sb) = (s(&a)?, s(&b)?);
    let lhs = s(&union(&a, &x))? + s(&union(&b, &x))? - s(&union(&union(&a, &b), &x))? - s(&x)?;
    let two = T::lit(2.0);
    let mut reports = vec![
        InequalityReport::inequality("lemma3_part1", (two * sa).min(two * sb) - lhs, &witness),
        InequalityReport::inequality(
            "lemma3_part3",
            (two * sa).min(two * sb) - mutual_information(&witness, &a, &b)?,
            &witness,
        ),
    ];
    if a_classical {
        let dev = classical_deviation(&witness, &union(&a, &x))?;
        if dev > Tolerances::<T>::default().classical {
            return Err(Error::NotClassical {
                group: "AX".into(),
                off_diagonal: dev.as_f64(),
            });
        }
        reports.push(InequalityReport::inequality(
            "lemma3_part2",
            sa.min(sb) - lhs,
            &witness,
        ));
    }
    Ok(reports)
}
