//! Cyclic Jacobi kernels: Hermitian eigendecomposition and one-sided SVD.
//!
//! Both are deterministic given identical input bits: sweeps visit pairs in a
//! fixed order and results are sorted with a stable sort.

use num_complex::Complex;

use super::matrix::ComplexMatrix;
use crate::scalar::{czero, Real, C};

const MAX_SWEEPS: usize = 80;

/// Eigen-pairs of a Hermitian matrix, eigenvalues in descending order.
#[derive(Debug, Clone)]
pub struct HermitianEigen<T: Real> {
    pub values: Vec<T>,
    /// Column `i` is the eigenvector for `values[i]`.
    pub vectors: ComplexMatrix<T>,
}

impl<T: Real> HermitianEigen<T> {
    pub fn vector(&self, i: usize) -> Vec<C<T>> {
        self.vectors.column(i)
    }
}

/// Rotation `G = [[c, s], [-s e^{-iφ}, c e^{-iφ}]]` diagonalizing the
/// Hermitian block `[[a, g], [ḡ, b]]` via `G† B G`.
#[derive(Clone, Copy)]
struct Rotation<T: Real> {
    c: T,
    s: T,
    phase: C<T>, // e^{-iφ}
}

impl<T: Real> Rotation<T> {
    fn new(a: T, b: T, g: C<T>) -> Self {
        let r = g.norm();
        let phase = (g / Complex::new(r, T::zero())).conj();
        let theta = (b - a) / (T::lit(2.0) * r);
        let sign = if theta < T::zero() {
            -T::one()
        } else {
            T::one()
        };
        let t = sign / (theta.abs() + (theta * theta + T::one()).sqrt());
        let c = T::one() / (T::one() + t * t).sqrt();
        Rotation { c, s: t * c, phase }
    }

    fn apply_columns(&self, m: &mut ComplexMatrix<T>, p: usize, q: usize) {
        let (c, s) = (
            Complex::new(self.c, T::zero()),
            Complex::new(self.s, T::zero()),
        );
        for k in 0..m.rows() {
            let (x, y) = (m[(k, p)], m[(k, q)]);
            m[(k, p)] = x * c - y * s * self.phase;
            m[(k, q)] = x * s + y * c * self.phase;
        }
    }

    fn apply_rows_adjoint(&self, m: &mut ComplexMatrix<T>, p: usize, q: usize) {
        let (c, s) = (
            Complex::new(self.c, T::zero()),
            Complex::new(self.s, T::zero()),
        );
        let ph = self.phase.conj();
        for k in 0..m.cols() {
            let (x, y) = (m[(p, k)], m[(q, k)]);
            m[(p, k)] = x * c - y * s * ph;
            m[(q, k)] = x * s + y * c * ph;
        }
    }
}

/// Eigendecomposition of a Hermitian matrix (only the upper triangle's
/// Hermitian part is meaningful; the input is symmetrized first).
pub fn hermitian_eigen<T: Real>(m: &ComplexMatrix<T>) -> HermitianEigen<T> {
    assert!(m.is_square(), "hermitian_eigen needs a square matrix");
    let n = m.rows();
    let half = T::lit(0.5);
    let mut a = ComplexMatrix::zeros(n, n);
    for r in 0..n {
        for c in 0..n {
            a[(r, c)] = (m[(r, c)] + m[(c, r)].conj()) * Complex::new(half, T::zero());
        }
    }
    let mut v = ComplexMatrix::identity(n);
    let total: T = a.data().iter().fold(T::zero(), |acc, z| acc + z.norm_sqr());
    let target = T::epsilon() * T::epsilon() * total;

    for _ in 0..MAX_SWEEPS {
        let mut off = T::zero();
        for p in 0..n {
            for q in (p + 1)..n {
                off = off + a[(p, q)].norm_sqr();
            }
        }
        if off <= target || off == T::zero() {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let g = a[(p, q)];
                if g.norm() <= T::min_positive_value() {
                    continue;
                }
                let rot = Rotation::new(a[(p, p)].re, a[(q, q)].re, g);
                rot.apply_columns(&mut a, p, q);
                rot.apply_rows_adjoint(&mut a, p, q);
                a[(p, q)] = czero();
                a[(q, p)] = czero();
                a[(p, p)].im = T::zero();
                a[(q, q)].im = T::zero();
                rot.apply_columns(&mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        a[(j, j)]
            .re
            .partial_cmp(&a[(i, i)].re)
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let mut vectors = ComplexMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &v.column(src));
    }
    HermitianEigen { values, vectors }
}

pub fn hermitian_eigenvalues<T: Real>(m: &ComplexMatrix<T>) -> Vec<T> {
    hermitian_eigen(m).values
}

/// Thin singular value decomposition `M = U Σ V†`.
#[derive(Debug, Clone)]
pub struct Svd<T: Real> {
    /// Singular values, descending.
    pub values: Vec<T>,
    /// `rows × cols` left vectors; columns for zero singular values are zero.
    pub left: ComplexMatrix<T>,
    /// `cols × cols` unitary.
    pub right: ComplexMatrix<T>,
}

/// One-sided (Hestenes) Jacobi SVD: rotates column pairs of `M` until they
/// are mutually orthogonal to relative precision, accumulating `V`.
pub fn svd<T: Real>(m: &ComplexMatrix<T>) -> Svd<T> {
    let cols = m.cols();
    let rows = m.rows();
    let mut w = m.clone();
    let mut v = ComplexMatrix::identity(cols);
    let eps = T::epsilon();
    let floor = eps * eps * m.data().iter().fold(T::zero(), |acc, z| acc + z.norm_sqr());

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for j in 0..cols {
            for k in (j + 1)..cols {
                let mut alpha = T::zero();
                let mut beta = T::zero();
                let mut gamma = czero();
                for r in 0..rows {
                    let (x, y) = (w[(r, j)], w[(r, k)]);
                    alpha = alpha + x.norm_sqr();
                    beta = beta + y.norm_sqr();
                    gamma = gamma + x.conj() * y;
                }
                if alpha <= floor || beta <= floor {
                    continue;
                }
                if gamma.norm() <= eps * alpha.sqrt() * beta.sqrt() {
                    continue;
                }
                rotated = true;
                let rot = Rotation::new(alpha, beta, gamma);
                rot.apply_columns(&mut w, j, k);
                rot.apply_columns(&mut v, j, k);
            }
        }
        if !rotated {
            break;
        }
    }

    let norms: Vec<T> = (0..cols)
        .map(|c| {
            (0..rows)
                .fold(T::zero(), |acc, r| acc + w[(r, c)].norm_sqr())
                .sqrt()
        })
        .collect();
    let mut order: Vec<usize> = (0..cols).collect();
    order.sort_by(|&i, &j| {
        norms[j]
            .partial_cmp(&norms[i])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let mut left = ComplexMatrix::zeros(rows, cols);
    let mut right = ComplexMatrix::zeros(cols, cols);
    let mut values = Vec::with_capacity(cols);
    for (dst, &src) in order.iter().enumerate() {
        let s = norms[src];
        values.push(s);
        right.set_column(dst, &v.column(src));
        if s > T::zero() {
            let inv = Complex::new(T::one() / s, T::zero());
            let col: Vec<C<T>> = w.column(src).iter().map(|z| z * inv).collect();
            left.set_column(dst, &col);
        }
    }
    Svd {
        values,
        left,
        right,
    }
}

/// Extends orthonormal columns to a full orthonormal basis of `C^dim` by
/// Gram–Schmidt over computational basis vectors, lowest index first.
pub fn complete_basis<T: Real>(columns: &[Vec<C<T>>], dim: usize) -> Vec<Vec<C<T>>> {
    let mut basis: Vec<Vec<C<T>>> = columns.to_vec();
    let threshold = T::lit(1e-3);
    for e in 0..dim {
        if basis.len() == dim {
            break;
        }
        let mut cand = vec![czero(); dim];
        cand[e] = Complex::new(T::one(), T::zero());
        // two passes of modified Gram–Schmidt
        for _ in 0..2 {
            for b in &basis {
                let proj = b
                    .iter()
                    .zip(&cand)
                    .fold(czero::<T>(), |acc, (x, y)| acc + x.conj() * y);
                for (c, x) in cand.iter_mut().zip(b) {
                    *c = *c - proj * x;
                }
            }
        }
        let norm = cand
            .iter()
            .fold(T::zero(), |acc, z| acc + z.norm_sqr())
            .sqrt();
        if norm > threshold {
            let inv = Complex::new(T::one() / norm, T::zero());
            basis.push(cand.iter().map(|z| z * inv).collect());
        }
    }
    basis
}
