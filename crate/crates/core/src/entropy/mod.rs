//! Entropy functionals (base 2) and inequality checkers.

mod inequalities;

pub use inequalities::{
    check_fact1, check_lemma3, check_mutual_information_identity, Fact1Part, InequalityReport,
};

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qmath::{
    hermitian_eigen, partial_trace, schmidt_decompose, Bipartition, DensityOp, Ket,
};
use crate::scalar::Real;
use crate::tolerance::Tolerances;

/// Finite distribution over labelled outcomes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct ProbabilityDist<T: Real> {
    outcomes: Vec<String>,
    probs: Vec<T>,
}

impl<T: Real> ProbabilityDist<T> {
    pub fn new(outcomes: Vec<String>, probs: Vec<T>) -> Result<Self> {
        if outcomes.len() != probs.len() {
            return Err(Error::InvalidDistribution(format!(
                "{} labels for {} probabilities",
                outcomes.len(),
                probs.len()
            )));
        }
        if probs.is_empty() {
            return Err(Error::InvalidDistribution("no outcomes".into()));
        }
        let tol = Tolerances::<T>::default().algebra;
        if let Some(p) = probs.iter().find(|p| !p.is_finite() || **p < -tol) {
            return Err(Error::InvalidDistribution(format!(
                "negative or non-finite probability {}",
                p.as_f64()
            )));
        }
        let total = probs.iter().fold(T::zero(), |a, &p| a + p);
        if (total - T::one()).abs() > tol {
            return Err(Error::InvalidDistribution(format!(
                "probabilities sum to {}",
                total.as_f64()
            )));
        }
        Ok(ProbabilityDist { outcomes, probs })
    }

    pub fn uniform(outcomes: Vec<String>) -> Result<Self> {
        let p = T::one() / T::lit(outcomes.len().max(1) as f64);
        let probs = vec![p; outcomes.len()];
        Self::new(outcomes, probs)
    }

    /// Outcomes labelled by their index.
    pub fn from_probs(probs: Vec<T>) -> Result<Self> {
        Self::new((0..probs.len()).map(|i| i.to_string()).collect(), probs)
    }

    pub fn outcomes(&self) -> &[String] {
        &self.outcomes
    }

    pub fn probs(&self) -> &[T] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    /// Total-variation distance; `+inf` when the outcome counts differ.
    pub fn total_variation(&self, other: &ProbabilityDist<T>) -> T {
        if self.len() != other.len() {
            return T::infinity();
        }
        self.probs
            .iter()
            .zip(&other.probs)
            .fold(T::zero(), |acc, (a, b)| acc + (*a - *b).abs())
            * T::lit(0.5)
    }
}

fn clip<T: Real>() -> T {
    Tolerances::<T>::default().clip
}

/// `−Σ p log₂ p` over values above the clip threshold.
pub fn spectrum_entropy<T: Real>(values: &[T], clip: T) -> T {
    let h = values
        .iter()
        .filter(|&&p| p > clip)
        .fold(T::zero(), |acc, &p| acc - p * p.log2());
    h.max(T::zero())
}

pub fn shannon_entropy<T: Real>(p: &ProbabilityDist<T>) -> T {
    spectrum_entropy(p.probs(), T::zero())
}

pub fn von_neumann<T: Real>(rho: &DensityOp<T>) -> T {
    spectrum_entropy(&rho.eigenvalues(), clip())
}

/// `S(ρ‖σ) = Tr ρ (log₂ ρ − log₂ σ)`, `+inf` when `supp ρ ⊄ supp σ`.
pub fn relative_entropy<T: Real>(rho: &DensityOp<T>, sigma: &DensityOp<T>) -> Result<T> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            actual: sigma.dim(),
        });
    }
    let clip = clip::<T>();
    let er = hermitian_eigen(rho.matrix());
    let es = hermitian_eigen(sigma.matrix());
    let d = rho.dim();
    let mut cross = T::zero();
    let mut outside_support = T::zero();
    for i in 0..d {
        let p = er.values[i];
        if p <= clip {
            continue;
        }
        let u = er.vector(i);
        for j in 0..d {
            let v = es.vector(j);
            let overlap = u
                .iter()
                .zip(&v)
                .fold(Complex::new(T::zero(), T::zero()), |acc, (a, b)| {
                    acc + a.conj() * b
                })
                .norm_sqr();
            let q = es.values[j];
            if q <= clip {
                outside_support = outside_support + p * overlap;
            } else {
                cross = cross + p * overlap * q.log2();
            }
        }
    }
    if outside_support > clip {
        return Ok(T::infinity());
    }
    let neg_entropy = -spectrum_entropy(&er.values, clip);
    Ok((neg_entropy - cross).max(T::zero()))
}

/// Entropy of the reduction to `group`; the empty group is the trivial system.
pub fn entropy_of<T: Real>(rho: &DensityOp<T>, group: &[usize]) -> Result<T> {
    if group.is_empty() {
        return Ok(T::zero());
    }
    if group.len() == rho.layout().len() {
        rho.layout().check_indices(group)?;
        return Ok(von_neumann(rho));
    }
    Ok(von_neumann(&partial_trace(rho, group)?))
}

pub(crate) fn union(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut u: Vec<usize> = a.iter().chain(b).copied().collect();
    u.sort_unstable();
    u.dedup();
    u
}

pub(crate) fn check_disjoint(groups: &[&[usize]]) -> Result<()> {
    let mut seen = std::collections::BTreeSet::new();
    for g in groups {
        for &i in *g {
            if !seen.insert(i) {
                return Err(Error::OverlappingGroups(i));
            }
        }
    }
    Ok(())
}

/// `I(A:B) = S(A) + S(B) − S(AB)`, reducing to `A ∪ B` first.
pub fn mutual_information<T: Real>(
    rho: &DensityOp<T>,
    group_a: &[usize],
    group_b: &[usize],
) -> Result<T> {
    check_disjoint(&[group_a, group_b])?;
    rho.layout().check_indices(&union(group_a, group_b))?;
    let sa = entropy_of(rho, group_a)?;
    let sb = entropy_of(rho, group_b)?;
    let sab = entropy_of(rho, &union(group_a, group_b))?;
    Ok(sa + sb - sab)
}

/// Entropy of the squared Schmidt coefficients across `cut`.
pub fn entanglement_measure<T: Real>(psi: &Ket<T>, cut: &Bipartition) -> Result<T> {
    let dec = schmidt_decompose(psi, cut)?;
    Ok(spectrum_entropy(&dec.weights(), clip()))
}

/// Largest coherence between distinct computational basis states of
/// `group` in the joint state: `max |⟨g, r|ρ|g', r'⟩|` over `g ≠ g'`.
///
/// Zero exactly when `ρ = Σ_g p_g |g⟩⟨g| ⊗ ρ_g`, i.e. the group is classical.
pub fn classical_deviation<T: Real>(rho: &DensityOp<T>, group: &[usize]) -> Result<T> {
    if group.is_empty() {
        return Ok(T::zero());
    }
    let layout = rho.layout();
    layout.check_indices(group)?;
    let order: Vec<usize> = group
        .iter()
        .copied()
        .chain(layout.complement(group))
        .collect();
    let map = layout.permutation_map(&order);
    let dg = layout.dim_of(group);
    let dr = rho.dim() / dg;
    let m = rho.matrix();
    let mut worst = T::zero();
    for (i, &oi) in map.iter().enumerate() {
        for (j, &oj) in map.iter().enumerate() {
            if i / dr != j / dr {
                worst = worst.max(m[(oi, oj)].norm());
            }
        }
    }
    Ok(worst)
}
