use serde::{Deserialize, Serialize};

use crate::scalar::Real;

/// Numerical thresholds used by the verifiers.
///
/// The `f64` defaults are 1e-9 for algebraic identities, 1e-7 for entropy
/// quantities and 1e-12 for the eigenvalue clip. Lower precision scalars get
/// thresholds scaled from machine epsilon instead.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct Tolerances<T: Real> {
    pub algebra: T,
    pub entropy: T,
    /// Minimum admissible slack in inequality sweeps.
    pub inequality: T,
    /// Max off-diagonal magnitude for a register to count as classical.
    pub classical: T,
    /// Eigenvalues below this are treated as exactly zero.
    pub clip: T,
}

impl<T: Real> Default for Tolerances<T> {
    fn default() -> Self {
        let eps = T::epsilon();
        let floor = |base: f64, scale: f64| T::lit(base).max(eps * T::lit(scale));
        Tolerances {
            algebra: floor(1e-9, 1e3),
            entropy: floor(1e-7, 1e4),
            inequality: floor(1e-8, 1e4),
            classical: floor(1e-10, 1e3),
            clip: floor(1e-12, 1e2),
        }
    }
}

impl<T: Real> Tolerances<T> {
    pub fn with_algebra(mut self, tol: T) -> Self {
        self.algebra = tol;
        self
    }

    pub fn with_entropy(mut self, tol: T) -> Self {
        self.entropy = tol;
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f64_defaults_match_documented_values() {
        let t = Tolerances::<f64>::default();
        assert_eq!(t.algebra, 1e-9);
        assert_eq!(t.entropy, 1e-7);
        assert_eq!(t.inequality, 1e-8);
        assert_eq!(t.classical, 1e-10);
        assert_eq!(t.clip, 1e-12);
    }

    #[test]
    fn f32_defaults_are_scaled_from_epsilon() {
        let t = Tolerances::<f32>::default();
        assert!(t.algebra > 1e-5 && t.algebra < 1e-3);
        assert!(t.clip > 1e-6);
    }
}
