//! Fixed circuits used by the protocol builders and reductions.
//!
//! Qubit 0 of a register is the most significant bit of a basis index. A
//! string `x ∈ {0,1,2,3}^k` is the `2k`-bit basis index read in pairs, see
//! [`base4_digits`].

use num_complex::Complex;

use crate::error::Result;
use crate::qmath::{base4_digits, pauli_from_digits, ComplexMatrix, Ket, SystemLayout, UnitaryOp};
use crate::scalar::{cone, Real};

/// Bell state `(σ_x ⊗ I)|Φ_k⟩` on `2k` qubits, first block then second block.
pub fn bell_state<T: Real>(x: usize, k: usize) -> Result<Ket<T>> {
    let sigma = pauli_from_digits::<T>(&base4_digits(x, k))?;
    let targets: Vec<usize> = (0..k).collect();
    Ket::maximally_entangled(k).apply(sigma.matrix(), &targets)
}

/// `W = Σ_x |x⟩⟨Bell_x|` on `2k` qubits: the deferred Bell measurement.
///
/// `W†` prepares `Bell_x` from `|x⟩`, in particular `|Φ_k⟩` from `|0⟩`.
pub fn bell_unitary<T: Real>(k: usize) -> Result<UnitaryOp<T>> {
    let d = 1usize << (2 * k);
    let mut prep = ComplexMatrix::zeros(d, d);
    for x in 0..d {
        prep.set_column(x, bell_state::<T>(x, k)?.amplitudes());
    }
    Ok(UnitaryOp::from_matrix_unchecked(prep.adjoint()))
}

/// `Σ_s |s⟩⟨s| ⊗ σ_s` on `[control 2k | target k]`.
pub fn controlled_pauli<T: Real>(k: usize) -> Result<UnitaryOp<T>> {
    let dc = 1usize << (2 * k);
    let dt = 1usize << k;
    let d = dc * dt;
    let mut m = ComplexMatrix::zeros(d, d);
    for s in 0..dc {
        let sigma = pauli_from_digits::<T>(&base4_digits(s, k))?;
        for r in 0..dt {
            for c in 0..dt {
                m[(s * dt + r, s * dt + c)] = sigma.matrix()[(r, c)];
            }
        }
    }
    Ok(UnitaryOp::from_matrix_unchecked(m))
}

/// Basis permutation on `n` qubits: `target_i ^= control_i` for each pair.
pub fn cnot_layer<T: Real>(pairs: &[(usize, usize)], n: usize) -> UnitaryOp<T> {
    let d = 1usize << n;
    let bit = |q: usize| 1usize << (n - 1 - q);
    let mut m = ComplexMatrix::zeros(d, d);
    for col in 0..d {
        let mut row = col;
        for &(c, t) in pairs {
            if row & bit(c) != 0 {
                row ^= bit(t);
            }
        }
        m[(row, col)] = cone();
    }
    UnitaryOp::from_matrix_unchecked(m)
}

/// `X^{b_1} ⊗ … ⊗ X^{b_n}` for the bits of `key`, most significant first.
pub fn bit_flips<T: Real>(key: usize, n: usize) -> UnitaryOp<T> {
    let d = 1usize << n;
    let mut m = ComplexMatrix::zeros(d, d);
    for col in 0..d {
        m[(col ^ key, col)] = Complex::new(T::one(), T::zero());
    }
    UnitaryOp::from_matrix_unchecked(m)
}

/// `n`-character bit string of `index`, most significant first.
pub fn bit_label(index: usize, n: usize) -> String {
    (0..n)
        .rev()
        .map(|k| if (index >> k) & 1 == 1 { '1' } else { '0' })
        .collect()
}

/// `n`-character base-4 string of `index`, most significant first.
pub fn pauli_label(index: usize, n: usize) -> String {
    base4_digits(index, n)
        .into_iter()
        .map(|d| char::from(b'0' + d))
        .collect()
}

/// Product of `steps` applied in order, each on its targets of an `n`-qubit
/// register. Built column by column, so no full-size matrix products.
pub fn circuit<T: Real>(n: usize, steps: &[(&UnitaryOp<T>, Vec<usize>)]) -> Result<UnitaryOp<T>> {
    let layout = SystemLayout::qubits(n);
    let d = layout.total_dim();
    let mut m = ComplexMatrix::zeros(d, d);
    for col in 0..d {
        let mut ket = Ket::basis(layout.clone(), col)?;
        for (op, targets) in steps {
            ket = ket.apply(op.matrix(), targets)?;
        }
        m.set_column(col, ket.amplitudes());
    }
    Ok(UnitaryOp::from_matrix_unchecked(m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmath::pauli;

    #[test]
    fn bell_unitary_maps_bell_states_to_labels() {
        let w = bell_unitary::<f64>(1).unwrap();
        assert!(w.unitarity_error() < 1e-12);
        for x in 0..4 {
            let b = bell_state::<f64>(x, 1).unwrap();
            let out = b.apply(w.matrix(), &[0, 1]).unwrap();
            assert!((out.amplitudes()[x].norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn bell_states_are_orthonormal_for_two_pairs() {
        let states: Vec<_> = (0..16).map(|x| bell_state::<f64>(x, 2).unwrap()).collect();
        for (i, a) in states.iter().enumerate() {
            for (j, b) in states.iter().enumerate() {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((a.inner(b).norm() - expect).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn controlled_pauli_blocks() {
        let cp = controlled_pauli::<f64>(1).unwrap();
        assert!(cp.unitarity_error() < 1e-12);
        let y = pauli::<f64>(2).unwrap();
        assert_eq!(cp.matrix()[(4, 5)], y[(0, 1)]);
        assert_eq!(cp.matrix()[(5, 4)], y[(1, 0)]);
    }

    #[test]
    fn cnot_layer_flips_target() {
        let c = cnot_layer::<f64>(&[(0, 1)], 2);
        let k = Ket::<f64>::qubit_basis(2, 2)
            .unwrap()
            .apply(c.matrix(), &[0, 1])
            .unwrap();
        assert_eq!(k.amplitudes()[3], cone());
    }

    #[test]
    fn labels() {
        assert_eq!(bit_label(5, 3), "101");
        assert_eq!(pauli_label(7, 2), "13");
    }
}
