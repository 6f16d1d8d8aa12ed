use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qmath::{random_ket, seeded_rng, Ket, SystemLayout};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnsembleKind {
    ClassicalBasis,
    QuantumFull,
}

/// Basis pair `(i, j)` with the probe indices of `(|i⟩+|j⟩)/√2` and `(|i⟩+i|j⟩)/√2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PairProbe {
    pub i: usize,
    pub j: usize,
    pub plus: usize,
    pub plus_i: usize,
}

/// Input states a verifier sweeps over.
///
/// Deterministic probes come first: the `2^n` basis states in index order,
/// then (for [`EnsembleKind::QuantumFull`]) the two superpositions of every
/// basis pair. Seeded Haar-random probes follow.
#[derive(Debug, Clone)]
pub struct InputEnsemble<T: Real> {
    kind: EnsembleKind,
    n: usize,
    deterministic: Vec<Ket<T>>,
    pairs: Vec<PairProbe>,
    random: Vec<Ket<T>>,
    seed: u64,
}

impl<T: Real> InputEnsemble<T> {
    pub fn classical_basis(n: usize) -> Result<Self> {
        check_n(n)?;
        Ok(InputEnsemble {
            kind: EnsembleKind::ClassicalBasis,
            n,
            deterministic: basis_states(n)?,
            pairs: Vec::new(),
            random: Vec::new(),
            seed: 0,
        })
    }

    pub fn quantum_full(n: usize, random_probes: usize, seed: u64) -> Result<Self> {
        check_n(n)?;
        let layout = SystemLayout::qubits(n);
        let mut deterministic = basis_states(n)?;
        let d = 1usize << n;
        let mut pairs = Vec::with_capacity(d * (d - 1) / 2);
        let one = Complex::new(T::one(), T::zero());
        let imag = Complex::new(T::zero(), T::one());
        for i in 0..d {
            for j in i + 1..d {
                let mut plus = vec![Complex::new(T::zero(), T::zero()); d];
                plus[i] = one;
                plus[j] = one;
                let mut plus_i = plus.clone();
                plus_i[j] = imag;
                let idx = deterministic.len();
                deterministic.push(Ket::normalized(layout.clone(), plus)?);
                deterministic.push(Ket::normalized(layout.clone(), plus_i)?);
                pairs.push(PairProbe {
                    i,
                    j,
                    plus: idx,
                    plus_i: idx + 1,
                });
            }
        }
        let mut rng = seeded_rng(seed);
        let random = (0..random_probes)
            .map(|_| random_ket(&layout, &mut rng))
            .collect();
        Ok(InputEnsemble {
            kind: EnsembleKind::QuantumFull,
            n,
            deterministic,
            pairs,
            random,
            seed,
        })
    }

    pub fn kind(&self) -> EnsembleKind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Basis states, then pair superpositions.
    pub fn deterministic(&self) -> &[Ket<T>] {
        &self.deterministic
    }

    pub fn random(&self) -> &[Ket<T>] {
        &self.random
    }

    pub fn pairs(&self) -> &[PairProbe] {
        &self.pairs
    }

    pub fn basis(&self) -> &[Ket<T>] {
        &self.deterministic[..1usize << self.n]
    }

    pub fn probes(&self) -> impl Iterator<Item = &Ket<T>> {
        self.deterministic.iter().chain(&self.random)
    }

    pub fn len(&self) -> usize {
        self.deterministic.len() + self.random.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 || n > 12 {
        return Err(Error::InvalidN {
            n,
            reason: "ensembles cover 1 to 12 qubits".into(),
        });
    }
    Ok(())
}

fn basis_states<T: Real>(n: usize) -> Result<Vec<Ket<T>>> {
    (0..1usize << n).map(|i| Ket::qubit_basis(n, i)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classical_basis_enumerates_all_states() {
        let e = InputEnsemble::<f64>::classical_basis(3).unwrap();
        assert_eq!(e.len(), 8);
        assert!(e.pairs().is_empty());
    }

    #[test]
    fn quantum_full_counts() {
        let e = InputEnsemble::<f64>::quantum_full(2, 50, 7).unwrap();
        assert_eq!(e.basis().len(), 4);
        assert_eq!(e.pairs().len(), 6);
        assert_eq!(e.deterministic().len(), 4 + 12);
        assert_eq!(e.len(), 66);
        let p = e.pairs()[0];
        let plus = &e.deterministic()[p.plus];
        assert!((plus.amplitudes()[p.i].re - 0.5f64.sqrt()).abs() < 1e-15);
        let plus_i = &e.deterministic()[p.plus_i];
        assert!((plus_i.amplitudes()[p.j].im - 0.5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn random_probes_are_seeded() {
        let a = InputEnsemble::<f64>::quantum_full(1, 5, 3).unwrap();
        let b = InputEnsemble::<f64>::quantum_full(1, 5, 3).unwrap();
        assert_eq!(a.random(), b.random());
    }
}
