//! Seeded sampling of Haar-random states and unitaries.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;

use super::layout::SystemLayout;
use super::matrix::ComplexMatrix;
use super::ops::reduce_ket;
use super::state::{DensityOp, Ket, UnitaryOp};
use crate::scalar::{Real, C};

pub type SeededRng = ChaCha20Rng;

pub fn seeded_rng(seed: u64) -> SeededRng {
    ChaCha20Rng::seed_from_u64(seed)
}

fn gaussian<T: Real, R: Rng + ?Sized>(rng: &mut R) -> C<T> {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex::new(T::lit(re), T::lit(im))
}

/// Normalized vector of independent standard complex Gaussians.
pub fn random_ket<T: Real, R: Rng + ?Sized>(layout: &SystemLayout, rng: &mut R) -> Ket<T> {
    let amps = (0..layout.total_dim()).map(|_| gaussian(rng)).collect();
    Ket::normalized(layout.clone(), amps).expect("gaussian vector is nonzero")
}

/// Reduction of a Haar-random pure state on `layout ⊗ layout`.
pub fn random_density<T: Real, R: Rng + ?Sized>(
    layout: &SystemLayout,
    rng: &mut R,
) -> DensityOp<T> {
    let doubled = layout.concat(layout);
    let psi = random_ket(&doubled, rng);
    let keep: Vec<usize> = (0..layout.len()).collect();
    reduce_ket(&psi, &keep).expect("valid keep set")
}

/// Haar-random unitary via Gram–Schmidt on Gaussian columns.
pub fn random_unitary<T: Real, R: Rng + ?Sized>(dim: usize, rng: &mut R) -> UnitaryOp<T> {
    let mut cols: Vec<Vec<C<T>>> = Vec::with_capacity(dim);
    while cols.len() < dim {
        let cand: Vec<C<T>> = (0..dim).map(|_| gaussian(rng)).collect();
        let mut basis = cols.clone();
        basis.push(cand);
        if let Some(v) = gram_schmidt_last(&basis) {
            cols.push(v);
        }
    }
    let mut m = ComplexMatrix::zeros(dim, dim);
    for (i, c) in cols.iter().enumerate() {
        m.set_column(i, c);
    }
    UnitaryOp::new(m).expect("orthonormal columns")
}

fn gram_schmidt_last<T: Real>(vectors: &[Vec<C<T>>]) -> Option<Vec<C<T>>> {
    let (last, prev) = vectors.split_last()?;
    let mut v = last.clone();
    for _ in 0..2 {
        for b in prev {
            let proj = b
                .iter()
                .zip(&v)
                .fold(Complex::new(T::zero(), T::zero()), |acc, (x, y)| {
                    acc + x.conj() * y
                });
            for (c, x) in v.iter_mut().zip(b) {
                *c = *c - proj * x;
            }
        }
    }
    let norm = v.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr()).sqrt();
    (norm > T::lit(1e-6)).then(|| {
        let inv = Complex::new(T::one() / norm, T::zero());
        v.iter().map(|z| z * inv).collect()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_state() {
        let l = SystemLayout::qubits(2);
        let a: Ket<f64> = random_ket(&l, &mut seeded_rng(5));
        let b: Ket<f64> = random_ket(&l, &mut seeded_rng(5));
        assert_eq!(a, b);
    }

    #[test]
    fn random_density_is_valid() {
        let l = SystemLayout::qubits(2);
        let rho: DensityOp<f64> = random_density(&l, &mut seeded_rng(1));
        assert!(DensityOp::new(l, rho.matrix().clone()).is_ok());
    }

    #[test]
    fn random_unitary_is_unitary() {
        let u: UnitaryOp<f64> = random_unitary(5, &mut seeded_rng(2));
        assert!(u.unitarity_error() < 1e-12);
    }
}
