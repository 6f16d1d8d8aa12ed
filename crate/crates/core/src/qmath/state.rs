//! Pure states, density operators and unitaries over a [`SystemLayout`].

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::layout::SystemLayout;
use super::linalg::hermitian_eigenvalues;
use super::matrix::{complex_vec, ComplexMatrix};
use crate::error::{Error, Result};
use crate::scalar::{cone, czero, Real, C};
use crate::tolerance::Tolerances;

/// Unit-norm amplitude vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct Ket<T: Real> {
    layout: SystemLayout,
    #[serde(with = "complex_vec")]
    amplitudes: Vec<C<T>>,
}

impl<T: Real> Ket<T> {
    pub fn new(layout: SystemLayout, amplitudes: Vec<C<T>>) -> Result<Self> {
        let ket = Self::new_unnormalized(layout, amplitudes)?;
        let tol = Tolerances::<T>::default().algebra;
        let norm = ket.norm();
        if (norm - T::one()).abs() > tol {
            return Err(Error::InvalidState(format!(
                "ket norm {} differs from 1",
                norm.as_f64()
            )));
        }
        Ok(ket)
    }

    /// Accepts any nonzero vector and rescales it to unit norm.
    pub fn normalized(layout: SystemLayout, amplitudes: Vec<C<T>>) -> Result<Self> {
        let mut ket = Self::new_unnormalized(layout, amplitudes)?;
        let norm = ket.norm();
        if norm <= T::zero() || !norm.is_finite() {
            return Err(Error::InvalidState("cannot normalize a zero vector".into()));
        }
        let inv = Complex::new(T::one() / norm, T::zero());
        ket.amplitudes.iter_mut().for_each(|z| *z = *z * inv);
        Ok(ket)
    }

    fn new_unnormalized(layout: SystemLayout, amplitudes: Vec<C<T>>) -> Result<Self> {
        if amplitudes.len() != layout.total_dim() {
            return Err(Error::DimensionMismatch {
                expected: layout.total_dim(),
                actual: amplitudes.len(),
            });
        }
        Ok(Ket { layout, amplitudes })
    }

    /// Computational basis state `|index⟩`.
    pub fn basis(layout: SystemLayout, index: usize) -> Result<Self> {
        let dim = layout.total_dim();
        if index >= dim {
            return Err(Error::IndexOutOfRange { index, count: dim });
        }
        let mut amps = vec![czero(); dim];
        amps[index] = cone();
        Ok(Ket {
            layout,
            amplitudes: amps,
        })
    }

    /// `n`-qubit computational basis state, `bits` read most significant first.
    pub fn qubit_basis(n: usize, index: usize) -> Result<Self> {
        Self::basis(SystemLayout::qubits(n), index)
    }

    pub fn zeros(layout: SystemLayout) -> Self {
        Self::basis(layout, 0).expect("index 0 exists")
    }

    /// `(|0…0⟩ + |1…1⟩)/√2`-style maximally entangled state on `k` qubit
    /// pairs, all first halves before all second halves.
    pub fn maximally_entangled(k: usize) -> Self {
        let d = 1usize << k;
        let amp = Complex::new(T::one() / T::lit(d as f64).sqrt(), T::zero());
        let mut amps = vec![czero(); d * d];
        for i in 0..d {
            amps[i * d + i] = amp;
        }
        Ket {
            layout: SystemLayout::qubits(2 * k),
            amplitudes: amps,
        }
    }

    pub fn layout(&self) -> &SystemLayout {
        &self.layout
    }

    pub fn amplitudes(&self) -> &[C<T>] {
        &self.amplitudes
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn norm(&self) -> T {
        self.amplitudes
            .iter()
            .fold(T::zero(), |acc, z| acc + z.norm_sqr())
            .sqrt()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Ket<T>) -> C<T> {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .fold(czero(), |acc, (a, b)| acc + a.conj() * b)
    }

    pub fn tensor(&self, other: &Ket<T>) -> Ket<T> {
        let mut amps = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.amplitudes {
            for b in &other.amplitudes {
                amps.push(a * b);
            }
        }
        Ket {
            layout: self.layout.concat(&other.layout),
            amplitudes: amps,
        }
    }

    /// Reorders subsystems: subsystem `k` of the result is `order[k]` here.
    pub fn permute(&self, order: &[usize]) -> Result<Ket<T>> {
        check_full_order(&self.layout, order)?;
        let map = self.layout.permutation_map(order);
        let layout = SystemLayout::new(order.iter().map(|&i| self.layout.dims()[i]).collect())?;
        Ok(Ket {
            layout,
            amplitudes: map.iter().map(|&old| self.amplitudes[old]).collect(),
        })
    }

    /// Applies `op` to the subsystems `targets` (in that order).
    pub fn apply(&self, op: &ComplexMatrix<T>, targets: &[usize]) -> Result<Ket<T>> {
        self.layout.check_indices(targets)?;
        let dt = self.layout.dim_of(targets);
        if op.rows() != dt || op.cols() != dt {
            return Err(Error::DimensionMismatch {
                expected: dt,
                actual: op.rows(),
            });
        }
        let order: Vec<usize> = targets
            .iter()
            .copied()
            .chain(self.layout.complement(targets))
            .collect();
        let map = self.layout.permutation_map(&order);
        let dr = self.dim() / dt;
        let permuted: Vec<C<T>> = map.iter().map(|&old| self.amplitudes[old]).collect();
        let mut out = vec![czero(); self.dim()];
        let opd = op.data();
        for row in 0..dt {
            for k in 0..dt {
                let a = opd[row * dt + k];
                if a.re == T::zero() && a.im == T::zero() {
                    continue;
                }
                for r in 0..dr {
                    out[map[row * dr + r]] = out[map[row * dr + r]] + a * permuted[k * dr + r];
                }
            }
        }
        Ok(Ket {
            layout: self.layout.clone(),
            amplitudes: out,
        })
    }

    /// Reshapes into a `dim(keep) × dim(rest)` matrix.
    pub fn split_matrix(&self, keep: &[usize]) -> Result<ComplexMatrix<T>> {
        self.layout.check_indices(keep)?;
        let order: Vec<usize> = keep
            .iter()
            .copied()
            .chain(self.layout.complement(keep))
            .collect();
        let map = self.layout.permutation_map(&order);
        let rows = self.layout.dim_of(keep);
        let cols = self.dim() / rows;
        ComplexMatrix::from_vec(
            rows,
            cols,
            map.iter().map(|&o| self.amplitudes[o]).collect(),
        )
    }

    pub fn projector(&self) -> DensityOp<T> {
        DensityOp {
            layout: self.layout.clone(),
            matrix: ComplexMatrix::outer(&self.amplitudes, &self.amplitudes),
        }
    }

    pub fn map_scalar<U: Real>(&self) -> Ket<U> {
        Ket {
            layout: self.layout.clone(),
            amplitudes: self
                .amplitudes
                .iter()
                .map(|z| Complex::new(U::lit(z.re.as_f64()), U::lit(z.im.as_f64())))
                .collect(),
        }
    }
}

/// Reduced operator `Tr_rest |a⟩⟨b|` on `keep` (kept in the given order).
///
/// Works for `a ≠ b`, giving the operator images used by linear extension.
pub fn partial_trace_outer<T: Real>(
    a: &Ket<T>,
    b: &Ket<T>,
    keep: &[usize],
) -> Result<ComplexMatrix<T>> {
    if a.layout != b.layout {
        return Err(Error::InvalidLayout("kets have different layouts".into()));
    }
    let ma = a.split_matrix(keep)?;
    let mb = if std::ptr::eq(a, b) {
        ma.clone()
    } else {
        b.split_matrix(keep)?
    };
    ma.matmul(&mb.adjoint())
}

fn check_full_order(layout: &SystemLayout, order: &[usize]) -> Result<()> {
    if order.len() != layout.len() {
        return Err(Error::InvalidSelection(format!(
            "permutation has {} entries for {} subsystems",
            order.len(),
            layout.len()
        )));
    }
    layout.check_indices(order)
}

/// Hermitian, positive semi-definite, unit-trace operator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct DensityOp<T: Real> {
    layout: SystemLayout,
    matrix: ComplexMatrix<T>,
}

impl<T: Real> DensityOp<T> {
    /// Validates hermiticity, trace and eigenvalue sign at default tolerances.
    pub fn new(layout: SystemLayout, matrix: ComplexMatrix<T>) -> Result<Self> {
        Self::with_tolerance(layout, matrix, Tolerances::default().algebra)
    }

    pub fn with_tolerance(layout: SystemLayout, matrix: ComplexMatrix<T>, tol: T) -> Result<Self> {
        let d = layout.total_dim();
        if matrix.rows() != d || matrix.cols() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                actual: matrix.rows(),
            });
        }
        let herm = matrix.hermiticity_error();
        if herm > tol {
            return Err(Error::InvalidState(format!(
                "not Hermitian (deviation {:e})",
                herm.as_f64()
            )));
        }
        let tr = matrix.trace();
        if (tr.re - T::one()).abs() > tol || tr.im.abs() > tol {
            return Err(Error::InvalidState(format!(
                "trace {} differs from 1",
                tr.re.as_f64()
            )));
        }
        let min = hermitian_eigenvalues(&matrix)
            .into_iter()
            .fold(T::infinity(), T::min);
        if min < -tol {
            return Err(Error::InvalidState(format!(
                "negative eigenvalue {:e}",
                min.as_f64()
            )));
        }
        Ok(DensityOp { layout, matrix })
    }

    /// Wraps a matrix already known to be a state (internal constructions).
    pub(crate) fn from_parts(layout: SystemLayout, matrix: ComplexMatrix<T>) -> Self {
        debug_assert_eq!(layout.total_dim(), matrix.rows());
        DensityOp { layout, matrix }
    }

    pub fn maximally_mixed(layout: SystemLayout) -> Self {
        let d = layout.total_dim();
        let m = ComplexMatrix::identity(d).scale_real(T::one() / T::lit(d as f64));
        DensityOp { layout, matrix: m }
    }

    /// Diagonal state with the given probabilities.
    pub fn diagonal(layout: SystemLayout, probs: &[T]) -> Result<Self> {
        Self::new(layout, ComplexMatrix::from_real_diagonal(probs))
    }

    pub fn layout(&self) -> &SystemLayout {
        &self.layout
    }

    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn eigenvalues(&self) -> Vec<T> {
        hermitian_eigenvalues(&self.matrix)
    }

    pub fn tensor(&self, other: &DensityOp<T>) -> DensityOp<T> {
        DensityOp {
            layout: self.layout.concat(&other.layout),
            matrix: self.matrix.kron(&other.matrix),
        }
    }

    pub fn permute(&self, order: &[usize]) -> Result<DensityOp<T>> {
        check_full_order(&self.layout, order)?;
        let map = self.layout.permutation_map(order);
        let d = self.dim();
        let mut m = ComplexMatrix::zeros(d, d);
        for (i, &oi) in map.iter().enumerate() {
            for (j, &oj) in map.iter().enumerate() {
                m[(i, j)] = self.matrix[(oi, oj)];
            }
        }
        Ok(DensityOp {
            layout: SystemLayout::new(order.iter().map(|&i| self.layout.dims()[i]).collect())?,
            matrix: m,
        })
    }

    /// `U ρ U†` with `U` acting on the whole space.
    pub fn conjugate_by(&self, u: &ComplexMatrix<T>) -> Result<DensityOp<T>> {
        let m = u.matmul(&self.matrix)?.matmul(&u.adjoint())?;
        Ok(DensityOp {
            layout: self.layout.clone(),
            matrix: m,
        })
    }

    /// Trace distance to another state of the same dimension.
    pub fn trace_distance(&self, other: &DensityOp<T>) -> Result<T> {
        super::ops::trace_distance(self, other)
    }

    pub fn map_scalar<U: Real>(&self) -> DensityOp<U> {
        DensityOp {
            layout: self.layout.clone(),
            matrix: self.matrix.map_scalar(),
        }
    }
}

/// Square unitary matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
#[serde(transparent)]
pub struct UnitaryOp<T: Real> {
    matrix: ComplexMatrix<T>,
}

impl<T: Real> UnitaryOp<T> {
    pub fn new(matrix: ComplexMatrix<T>) -> Result<Self> {
        Self::with_tolerance(matrix, Tolerances::default().algebra)
    }

    pub fn with_tolerance(matrix: ComplexMatrix<T>, tol: T) -> Result<Self> {
        let err = matrix.unitarity_error();
        if err > tol {
            return Err(Error::NotUnitary {
                deviation: err.as_f64(),
            });
        }
        Ok(UnitaryOp { matrix })
    }

    pub(crate) fn from_matrix_unchecked(matrix: ComplexMatrix<T>) -> Self {
        UnitaryOp { matrix }
    }

    pub fn identity(dim: usize) -> Self {
        UnitaryOp {
            matrix: ComplexMatrix::identity(dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.matrix
    }

    pub fn adjoint(&self) -> Self {
        UnitaryOp {
            matrix: self.matrix.adjoint(),
        }
    }

    /// `self · other` (apply `other` first).
    pub fn compose(&self, other: &UnitaryOp<T>) -> Result<Self> {
        Ok(UnitaryOp {
            matrix: self.matrix.matmul(&other.matrix)?,
        })
    }

    pub fn tensor(&self, other: &UnitaryOp<T>) -> Self {
        UnitaryOp {
            matrix: self.matrix.kron(&other.matrix),
        }
    }

    pub fn unitarity_error(&self) -> T {
        self.matrix.unitarity_error()
    }

    /// Lifts this operator to act on `targets` of an `n`-qubit register.
    pub fn embed_qubits(&self, targets: &[usize], n: usize) -> Result<Self> {
        let layout = SystemLayout::qubits(n);
        let dim = layout.total_dim();
        let mut m = ComplexMatrix::zeros(dim, dim);
        for col in 0..dim {
            let ket = Ket::basis(layout.clone(), col)?.apply(&self.matrix, targets)?;
            m.set_column(col, ket.amplitudes());
        }
        Ok(UnitaryOp { matrix: m })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ket_rejects_unnormalized() {
        let l = SystemLayout::qubits(1);
        assert!(Ket::<f64>::new(l.clone(), vec![cone(), cone()]).is_err());
        let k = Ket::<f64>::normalized(l, vec![cone(), cone()]).unwrap();
        assert!((k.norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn apply_on_second_qubit() {
        let x = ComplexMatrix::<f64>::from_rows(&[
            &[(0.0, 0.0), (1.0, 0.0)],
            &[(1.0, 0.0), (0.0, 0.0)],
        ])
        .unwrap();
        let k = Ket::<f64>::qubit_basis(2, 0)
            .unwrap()
            .apply(&x, &[1])
            .unwrap();
        assert_eq!(k.amplitudes()[1], cone());
        let k = Ket::<f64>::qubit_basis(2, 0)
            .unwrap()
            .apply(&x, &[0])
            .unwrap();
        assert_eq!(k.amplitudes()[2], cone());
    }

    #[test]
    fn apply_respects_target_order() {
        // CNOT with control = first target
        let cnot = ComplexMatrix::<f64>::from_rows(&[
            &[(1.0, 0.0), (0.0, 0.0), (0.0, 0.0), (0.0, 0.0)],
            &[(0.0, 0.0), (1.0, 0.0), (0.0, 0.0), (0.0, 0.0)],
            &[(0.0, 0.0), (0.0, 0.0), (0.0, 0.0), (1.0, 0.0)],
            &[(0.0, 0.0), (0.0, 0.0), (1.0, 0.0), (0.0, 0.0)],
        ])
        .unwrap();
        // |001⟩ with control qubit 2, target qubit 0 → |101⟩
        let k = Ket::<f64>::qubit_basis(3, 1)
            .unwrap()
            .apply(&cnot, &[2, 0])
            .unwrap();
        assert_eq!(k.amplitudes()[5], cone());
    }

    #[test]
    fn density_validation() {
        let l = SystemLayout::qubits(1);
        let bad = ComplexMatrix::<f64>::from_real_diagonal(&[1.5, -0.5]);
        assert!(DensityOp::new(l.clone(), bad).is_err());
        let off = ComplexMatrix::<f64>::from_rows(&[
            &[(0.5, 0.0), (0.1, 0.0)],
            &[(0.2, 0.0), (0.5, 0.0)],
        ])
        .unwrap();
        assert!(DensityOp::new(l.clone(), off).is_err());
        assert!(DensityOp::new(l, ComplexMatrix::from_real_diagonal(&[0.25, 0.75])).is_ok());
    }

    #[test]
    fn embed_matches_kron() {
        let x = ComplexMatrix::<f64>::from_rows(&[
            &[(0.0, 0.0), (1.0, 0.0)],
            &[(1.0, 0.0), (0.0, 0.0)],
        ])
        .unwrap();
        let u = UnitaryOp::new(x.clone())
            .unwrap()
            .embed_qubits(&[1], 2)
            .unwrap();
        assert_eq!(u.matrix(), &ComplexMatrix::identity(2).kron(&x));
    }
}
