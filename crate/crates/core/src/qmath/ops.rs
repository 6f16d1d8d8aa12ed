//! Composition, reduction and decomposition of states and operators.

use num_complex::Complex;

use super::layout::{Bipartition, SystemLayout};
use super::linalg::{complete_basis, hermitian_eigen, hermitian_eigenvalues, svd};
use super::matrix::ComplexMatrix;
use super::state::{DensityOp, Ket, UnitaryOp};
use crate::error::{Error, Result};
use crate::scalar::{czero, Real, C};
use crate::tolerance::Tolerances;

/// Kronecker product with `a` outermost.
pub fn tensor<T: Real>(a: &ComplexMatrix<T>, b: &ComplexMatrix<T>) -> ComplexMatrix<T> {
    a.kron(b)
}

/// Reduced state on `keep`, in ascending subsystem order.
pub fn partial_trace<T: Real>(state: &DensityOp<T>, keep: &[usize]) -> Result<DensityOp<T>> {
    let layout = state.layout();
    layout.check_indices(keep)?;
    let mut keep = keep.to_vec();
    keep.sort_unstable();
    let rest = layout.complement(&keep);
    let order: Vec<usize> = keep.iter().chain(&rest).copied().collect();
    let map = layout.permutation_map(&order);
    let dk = layout.dim_of(&keep);
    let dr = state.dim() / dk;
    let m = state.matrix();
    let mut out = ComplexMatrix::zeros(dk, dk);
    for a in 0..dk {
        for b in 0..dk {
            let mut acc = czero();
            for r in 0..dr {
                acc = acc + m[(map[a * dr + r], map[b * dr + r])];
            }
            out[(a, b)] = acc;
        }
    }
    Ok(DensityOp::from_parts(layout.select(&keep)?, out))
}

/// Reduced state of a pure state on `keep`, in ascending subsystem order.
pub fn reduce_ket<T: Real>(psi: &Ket<T>, keep: &[usize]) -> Result<DensityOp<T>> {
    let mut keep = keep.to_vec();
    keep.sort_unstable();
    let m = super::state::partial_trace_outer(psi, psi, &keep)?;
    Ok(DensityOp::from_parts(psi.layout().select(&keep)?, m))
}

/// `½ Σ |λ_i(a − b)|`.
pub fn trace_distance<T: Real>(a: &DensityOp<T>, b: &DensityOp<T>) -> Result<T> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            actual: b.dim(),
        });
    }
    Ok(operator_trace_norm(&(a.matrix() - b.matrix())) * T::lit(0.5))
}

/// Trace norm of a Hermitian operator.
pub(crate) fn operator_trace_norm<T: Real>(m: &ComplexMatrix<T>) -> T {
    hermitian_eigenvalues(m)
        .into_iter()
        .fold(T::zero(), |acc, v| acc + v.abs())
}

#[derive(Debug, Clone)]
pub struct SchmidtDecomposition<T: Real> {
    pub cut: Bipartition,
    /// Nonnegative, descending.
    pub coefficients: Vec<T>,
    pub left: Vec<Ket<T>>,
    pub right: Vec<Ket<T>>,
}

impl<T: Real> SchmidtDecomposition<T> {
    /// Squared coefficients.
    pub fn weights(&self) -> Vec<T> {
        self.coefficients.iter().map(|c| *c * *c).collect()
    }

    pub fn rank(&self) -> usize {
        self.coefficients.len()
    }

    /// `Σ c_i |a_i⟩⊗|b_i⟩` in the original subsystem order.
    pub fn reconstruct(&self) -> Result<Ket<T>> {
        let left_layout = self.left[0].layout().clone();
        let right_layout = self.right[0].layout().clone();
        let joint = left_layout.concat(&right_layout);
        let mut amps = vec![czero(); joint.total_dim()];
        for ((c, a), b) in self.coefficients.iter().zip(&self.left).zip(&self.right) {
            let prod = a.tensor(b);
            for (acc, z) in amps.iter_mut().zip(prod.amplitudes()) {
                *acc = *acc + z * Complex::new(*c, T::zero());
            }
        }
        let permuted = Ket::normalized(joint, amps)?;
        let order = self.cut.order();
        let mut inverse = vec![0; order.len()];
        for (k, &o) in order.iter().enumerate() {
            inverse[o] = k;
        }
        permuted.permute(&inverse)
    }
}

pub fn schmidt_decompose<T: Real>(
    psi: &Ket<T>,
    cut: &Bipartition,
) -> Result<SchmidtDecomposition<T>> {
    let layout = psi.layout();
    if layout.len() < 2 {
        return Err(Error::SingleSubsystem);
    }
    check_cut(layout, cut)?;
    let m = psi.split_matrix(&cut.left)?;
    let dec = svd(&m);
    let smax = dec.values.first().copied().unwrap_or(T::zero());
    let threshold = T::epsilon() * T::lit(512.0) * smax;
    let left_layout = layout.select(&cut.left)?;
    let right_layout = layout.select(&cut.right)?;
    let mut coefficients = Vec::new();
    let mut left = Vec::new();
    let mut right = Vec::new();
    for (k, &s) in dec.values.iter().enumerate() {
        if s <= threshold {
            break;
        }
        coefficients.push(s);
        left.push(Ket::normalized(left_layout.clone(), dec.left.column(k))?);
        // ψ = Σ s_k |u_k⟩ ⊗ |v̄_k⟩
        let v: Vec<C<T>> = dec.right.column(k).iter().map(|z| z.conj()).collect();
        right.push(Ket::normalized(right_layout.clone(), v)?);
    }
    Ok(SchmidtDecomposition {
        cut: cut.clone(),
        coefficients,
        left,
        right,
    })
}

fn check_cut(layout: &SystemLayout, cut: &Bipartition) -> Result<()> {
    layout.check_indices(&cut.order())?;
    if cut.left.len() + cut.right.len() != layout.len() {
        return Err(Error::InvalidSelection(
            "bipartition does not cover the layout".into(),
        ));
    }
    if cut.left.is_empty() || cut.right.is_empty() {
        return Err(Error::InvalidSelection("bipartition group is empty".into()));
    }
    Ok(())
}

/// Canonical purification on `(reference ⊗ original)`: `Σ √λ_i |i⟩|e_i⟩` with
/// eigenvalues in descending order.
pub fn purify<T: Real>(rho: &DensityOp<T>) -> Ket<T> {
    let eig = hermitian_eigen(rho.matrix());
    let d = rho.dim();
    let mut amps = vec![czero(); d * d];
    for (i, &lambda) in eig.values.iter().enumerate() {
        let w = lambda.max(T::zero()).sqrt();
        if w == T::zero() {
            continue;
        }
        for (j, e) in eig.vector(i).iter().enumerate() {
            amps[i * d + j] = e * Complex::new(w, T::zero());
        }
    }
    let layout = rho.layout().concat(rho.layout());
    Ket::normalized(layout, amps).expect("unit-trace state has nonzero purification")
}

/// Unitary `U` on the left group of `cut` with `(U ⊗ I)|φ1⟩ = |φ2⟩`.
///
/// Both states must reduce to the same operator on the right group. With
/// `M1 = U1 Σ V†`, the images `M2 v_k / s_k` are orthonormal, so `U` maps
/// each left singular vector of `M1` to the matching image and the two
/// orthogonal complements onto each other (Gram–Schmidt, lowest index first).
/// No eigenspace alignment is needed, degenerate spectra included.
pub fn local_transition<T: Real>(
    phi1: &Ket<T>,
    phi2: &Ket<T>,
    cut: &Bipartition,
    tol: T,
) -> Result<UnitaryOp<T>> {
    if phi1.layout() != phi2.layout() {
        return Err(Error::InvalidLayout("states have different layouts".into()));
    }
    check_cut(phi1.layout(), cut)?;
    let m1 = phi1.split_matrix(&cut.left)?;
    let m2 = phi2.split_matrix(&cut.left)?;
    let g1 = m1.adjoint().matmul(&m1)?;
    let g2 = m2.adjoint().matmul(&m2)?;
    let deviation = g1.max_abs_diff(&g2);
    if deviation > tol {
        return Err(Error::ReductionMismatch {
            deviation: deviation.as_f64(),
        });
    }

    let dl = m1.rows();
    let dec = svd(&m1);
    let smax = dec.values.first().copied().unwrap_or(T::zero());
    let threshold = T::epsilon() * T::lit(512.0) * smax;
    let mut src: Vec<Vec<C<T>>> = Vec::new();
    let mut dst: Vec<Vec<C<T>>> = Vec::new();
    for (k, &s) in dec.values.iter().enumerate() {
        if s <= threshold || src.len() == dl {
            break;
        }
        src.push(dec.left.column(k));
        let image = m2.matvec(&dec.right.column(k))?;
        let inv = Complex::new(T::one() / s, T::zero());
        dst.push(image.iter().map(|z| z * inv).collect());
    }
    let src = complete_basis(&orthonormalize(src), dl);
    let dst = complete_basis(&orthonormalize(dst), dl);
    let mut u = ComplexMatrix::zeros(dl, dl);
    for (a, b) in src.iter().zip(&dst) {
        u = &u + &ComplexMatrix::outer(b, a);
    }
    UnitaryOp::with_tolerance(u, tol.max(Tolerances::<T>::default().algebra))
}

// Modified Gram–Schmidt in the given order.
fn orthonormalize<T: Real>(vectors: Vec<Vec<C<T>>>) -> Vec<Vec<C<T>>> {
    let mut out: Vec<Vec<C<T>>> = Vec::with_capacity(vectors.len());
    for mut v in vectors {
        for b in &out {
            let proj = b
                .iter()
                .zip(&v)
                .fold(czero::<T>(), |acc, (x, y)| acc + x.conj() * y);
            for (c, x) in v.iter_mut().zip(b) {
                *c = *c - proj * x;
            }
        }
        let norm = v.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr()).sqrt();
        if norm > T::epsilon() {
            let inv = Complex::new(T::one() / norm, T::zero());
            out.push(v.iter().map(|z| z * inv).collect());
        }
    }
    out
}

/// Single-qubit Pauli `σ_s`; `σ_2 = [[0, i], [−i, 0]]`.
pub fn pauli<T: Real>(s: u8) -> Result<ComplexMatrix<T>> {
    let (o, l, i) = ((0.0, 0.0), (1.0, 0.0), (0.0, 1.0));
    let rows: [[(f64, f64); 2]; 2] = match s {
        0 => [[l, o], [o, l]],
        1 => [[o, l], [l, o]],
        2 => [[o, i], [(0.0, -1.0), o]],
        3 => [[l, o], [o, (-1.0, 0.0)]],
        _ => return Err(Error::InvalidPauliSymbol(char::from(b'0' + s.min(9)))),
    };
    ComplexMatrix::from_rows(&[&rows[0], &rows[1]])
}

/// `σ_{x_1} ⊗ … ⊗ σ_{x_n}` for a digit string over `{0,1,2,3}`.
pub fn pauli_string<T: Real>(x: &str) -> Result<UnitaryOp<T>> {
    let digits = x
        .chars()
        .map(|c| match c {
            '0'..='3' => Ok(c as u8 - b'0'),
            other => Err(Error::InvalidPauliSymbol(other)),
        })
        .collect::<Result<Vec<u8>>>()?;
    pauli_from_digits(&digits)
}

pub fn pauli_from_digits<T: Real>(digits: &[u8]) -> Result<UnitaryOp<T>> {
    if digits.is_empty() {
        return Err(Error::InvalidN {
            n: 0,
            reason: "Pauli string needs at least one symbol".into(),
        });
    }
    let mut m = ComplexMatrix::identity(1);
    for &d in digits {
        m = m.kron(&pauli(d)?);
    }
    Ok(UnitaryOp::from_matrix_unchecked(m))
}

/// Base-4 digits of `index` over `n` positions, most significant first.
///
/// This is the string `x ∈ {0,1,2,3}^n` of a `2n`-bit classical state, bits
/// paired left to right.
pub fn base4_digits(index: usize, n: usize) -> Vec<u8> {
    (0..n)
        .rev()
        .map(|k| ((index >> (2 * k)) & 3) as u8)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cone;

    type K = Ket<f64>;

    fn epr() -> K {
        K::maximally_entangled(1)
    }

    #[test]
    fn sigma3_tensor_sigma3_corner() {
        let z = pauli::<f64>(3).unwrap();
        assert_eq!(tensor(&z, &z)[(3, 3)], cone());
    }

    #[test]
    fn sigma1_tensor_flips_both() {
        let x = pauli::<f64>(1).unwrap();
        let k = K::qubit_basis(2, 0)
            .unwrap()
            .apply(&tensor(&x, &x), &[0, 1])
            .unwrap();
        assert_eq!(k.amplitudes()[3], cone());
    }

    #[test]
    fn epr_reduces_to_maximally_mixed() {
        let r = partial_trace(&epr().projector(), &[0]).unwrap();
        assert!(r
            .matrix()
            .approx_eq(&ComplexMatrix::identity(2).scale_real(0.5), 1e-15));
    }

    #[test]
    fn ghz_reduction_keeps_classical_correlation() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let mut amps = vec![czero(); 8];
        amps[0] = Complex::new(h, 0.0);
        amps[7] = Complex::new(h, 0.0);
        let ghz = K::new(SystemLayout::qubits(3), amps).unwrap();
        let r = partial_trace(&ghz.projector(), &[0, 1]).unwrap();
        let expected = ComplexMatrix::from_real_diagonal(&[0.5, 0.0, 0.0, 0.5]);
        assert!(r.matrix().approx_eq(&expected, 1e-15));
        assert!(reduce_ket(&ghz, &[1, 0])
            .unwrap()
            .matrix()
            .approx_eq(&expected, 1e-15));
    }

    #[test]
    fn partial_trace_index_errors() {
        let rho = epr().projector();
        assert!(matches!(
            partial_trace(&rho, &[2]),
            Err(Error::IndexOutOfRange { .. })
        ));
        assert!(partial_trace(&rho, &[]).is_err());
    }

    #[test]
    fn schmidt_of_epr_and_product() {
        let l = SystemLayout::qubits(2);
        let cut = Bipartition::at(&l, 1).unwrap();
        let s = schmidt_decompose(&epr(), &cut).unwrap();
        assert_eq!(s.rank(), 2);
        for c in &s.coefficients {
            assert!((c - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-14);
        }
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let plus = K::new(SystemLayout::qubits(1), vec![Complex::new(h, 0.0); 2]).unwrap();
        let prod = K::qubit_basis(1, 0).unwrap().tensor(&plus);
        let s = schmidt_decompose(&prod, &cut).unwrap();
        assert_eq!(s.rank(), 1);
        assert!((s.coefficients[0] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn schmidt_already_in_form() {
        let a = 0.9f64.sqrt();
        let b = 0.1f64.sqrt();
        let mut amps = vec![czero(); 4];
        amps[0] = Complex::new(a, 0.0);
        amps[3] = Complex::new(b, 0.0);
        let psi = K::new(SystemLayout::qubits(2), amps).unwrap();
        let s = schmidt_decompose(&psi, &Bipartition::at(psi.layout(), 1).unwrap()).unwrap();
        assert!((s.coefficients[0] - a).abs() < 1e-14);
        assert!((s.coefficients[1] - b).abs() < 1e-14);
    }

    #[test]
    fn schmidt_rejects_single_subsystem() {
        let k = K::qubit_basis(1, 0).unwrap();
        let cut = Bipartition {
            left: vec![0],
            right: vec![],
        };
        assert_eq!(
            schmidt_decompose(&k, &cut).unwrap_err(),
            Error::SingleSubsystem
        );
    }

    #[test]
    fn purify_maximally_mixed_is_maximally_entangled() {
        let psi = purify(&DensityOp::<f64>::maximally_mixed(SystemLayout::qubits(1)));
        let s = schmidt_decompose(&psi, &Bipartition::at(psi.layout(), 1).unwrap()).unwrap();
        assert_eq!(s.rank(), 2);
        assert!((s.coefficients[1] - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-14);
    }

    #[test]
    fn purify_pure_is_product() {
        let psi = purify(&K::qubit_basis(1, 0).unwrap().projector());
        let s = schmidt_decompose(&psi, &Bipartition::at(psi.layout(), 1).unwrap()).unwrap();
        assert_eq!(s.rank(), 1);
    }

    #[test]
    fn purify_round_trip_diag() {
        let rho = DensityOp::<f64>::diagonal(SystemLayout::qubits(1), &[0.9, 0.1]).unwrap();
        let psi = purify(&rho);
        let back = partial_trace(&psi.projector(), &[1]).unwrap();
        assert!(back.matrix().approx_eq(rho.matrix(), 1e-10));
    }

    #[test]
    fn local_transition_epr_to_bit_flipped_bell() {
        let x = pauli::<f64>(1).unwrap();
        let phi1 = epr();
        let phi2 = phi1.apply(&x, &[0]).unwrap();
        let cut = Bipartition::at(phi1.layout(), 1).unwrap();
        let u = local_transition(&phi1, &phi2, &cut, 1e-9).unwrap();
        let mapped = phi1.apply(u.matrix(), &[0]).unwrap();
        assert!(trace_distance(&mapped.projector(), &phi2.projector()).unwrap() < 1e-12);
        assert!(u.unitarity_error() < 1e-12);
    }

    #[test]
    fn local_transition_product_purifications() {
        let phi1 = K::qubit_basis(2, 0).unwrap();
        let phi2 = K::qubit_basis(2, 2).unwrap();
        let cut = Bipartition::at(phi1.layout(), 1).unwrap();
        let u = local_transition(&phi1, &phi2, &cut, 1e-9).unwrap();
        // σ_1 up to phase: |⟨σ_1, U⟩| = 2
        let overlap = pauli::<f64>(1).unwrap().inner(u.matrix()).norm();
        assert!((overlap - 2.0).abs() < 1e-12);
    }

    #[test]
    fn local_transition_identity_when_equal() {
        let phi = epr();
        let cut = Bipartition::at(phi.layout(), 1).unwrap();
        let u = local_transition(&phi, &phi, &cut, 1e-9).unwrap();
        let mapped = phi.apply(u.matrix(), &[0]).unwrap();
        assert!((mapped.inner(&phi).norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn local_transition_rejects_different_reductions() {
        let phi1 = epr();
        let phi2 = K::qubit_basis(2, 0).unwrap();
        let cut = Bipartition::at(phi1.layout(), 1).unwrap();
        assert!(matches!(
            local_transition(&phi1, &phi2, &cut, 1e-9),
            Err(Error::ReductionMismatch { .. })
        ));
    }

    #[test]
    fn pauli_strings() {
        assert_eq!(
            pauli_string::<f64>("0").unwrap().matrix(),
            &ComplexMatrix::identity(2)
        );
        let s13 = pauli_string::<f64>("13").unwrap();
        assert_eq!(
            s13.matrix(),
            &pauli::<f64>(1).unwrap().kron(&pauli(3).unwrap())
        );
        let y = pauli_string::<f64>("2").unwrap();
        assert_eq!(y.compose(&y).unwrap().matrix(), &ComplexMatrix::identity(2));
        assert_eq!(
            pauli_string::<f64>("14").unwrap_err(),
            Error::InvalidPauliSymbol('4')
        );
        assert!(pauli_string::<f64>("").is_err());
    }

    #[test]
    fn sigma2_uses_documented_sign() {
        let y = pauli::<f64>(2).unwrap();
        assert_eq!(y[(0, 1)], Complex::new(0.0, 1.0));
        assert_eq!(y[(1, 0)], Complex::new(0.0, -1.0));
    }

    #[test]
    fn trace_distance_examples() {
        let l = SystemLayout::qubits(1);
        let zero = K::basis(l.clone(), 0).unwrap().projector();
        let one = K::basis(l.clone(), 1).unwrap().projector();
        let mixed = DensityOp::maximally_mixed(l);
        assert!(trace_distance(&zero, &zero).unwrap().abs() < 1e-15);
        assert!((trace_distance(&zero, &one).unwrap() - 1.0).abs() < 1e-15);
        assert!((trace_distance(&mixed, &zero).unwrap() - 0.5).abs() < 1e-15);
        let big = DensityOp::maximally_mixed(SystemLayout::qubits(2));
        assert!(matches!(
            trace_distance(&big, &zero),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn base4_pairs_bits_left_to_right() {
        // 2n-bit string 10 01 → x = "21"
        assert_eq!(base4_digits(0b1001, 2), vec![2, 1]);
        assert_eq!(base4_digits(3, 1), vec![3]);
    }
}
