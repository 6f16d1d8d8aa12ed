//! Dense complex linear algebra over multi-qudit systems.

pub mod layout;
pub mod linalg;
pub mod matrix;
pub mod ops;
pub mod random;
pub mod state;

pub use layout::{Bipartition, SystemLayout};
pub use linalg::{hermitian_eigen, svd, HermitianEigen, Svd};
pub use matrix::ComplexMatrix;
pub use ops::{
    base4_digits, local_transition, partial_trace, pauli, pauli_from_digits, pauli_string, purify,
    reduce_ket, schmidt_decompose, tensor, trace_distance, SchmidtDecomposition,
};
pub use random::{random_density, random_ket, random_unitary, seeded_rng, SeededRng};
pub use state::{partial_trace_outer, DensityOp, Ket, UnitaryOp};
