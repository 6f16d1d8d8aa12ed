use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Ordered subsystem dimensions; index 0 is the outermost tensor factor.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct SystemLayout {
    dims: Vec<usize>,
}

impl SystemLayout {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::InvalidLayout("no subsystems".into()));
        }
        if let Some(d) = dims.iter().find(|&&d| d < 2) {
            return Err(Error::InvalidLayout(format!("subsystem dimension {d} < 2")));
        }
        Ok(SystemLayout { dims })
    }

    pub fn qubits(n: usize) -> Self {
        assert!(n > 0, "at least one qubit");
        SystemLayout { dims: vec![2; n] }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn concat(&self, other: &SystemLayout) -> SystemLayout {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        SystemLayout { dims }
    }

    /// Product of the dimensions at `indices`.
    pub fn dim_of(&self, indices: &[usize]) -> usize {
        indices.iter().map(|&i| self.dims[i]).product()
    }

    pub fn select(&self, indices: &[usize]) -> Result<SystemLayout> {
        self.check_indices(indices)?;
        SystemLayout::new(indices.iter().map(|&i| self.dims[i]).collect())
    }

    /// Errors on empty, duplicate or out-of-range index lists.
    pub fn check_indices(&self, indices: &[usize]) -> Result<()> {
        if indices.is_empty() {
            return Err(Error::InvalidSelection("empty subsystem set".into()));
        }
        let mut seen = vec![false; self.dims.len()];
        for &i in indices {
            if i >= self.dims.len() {
                return Err(Error::IndexOutOfRange {
                    index: i,
                    count: self.dims.len(),
                });
            }
            if seen[i] {
                return Err(Error::InvalidSelection(format!("duplicate index {i}")));
            }
            seen[i] = true;
        }
        Ok(())
    }

    /// Indices not in `indices`, ascending.
    pub fn complement(&self, indices: &[usize]) -> Vec<usize> {
        (0..self.dims.len())
            .filter(|i| !indices.contains(i))
            .collect()
    }

    /// For a reordering `order` (a permutation of all indices), maps each flat
    /// index of the permuted layout to the flat index in this layout.
    pub fn permutation_map(&self, order: &[usize]) -> Vec<usize> {
        debug_assert_eq!(order.len(), self.dims.len());
        let n = self.dims.len();
        let mut old_strides = vec![1usize; n];
        for k in (0..n.saturating_sub(1)).rev() {
            old_strides[k] = old_strides[k + 1] * self.dims[k + 1];
        }
        let new_dims: Vec<usize> = order.iter().map(|&i| self.dims[i]).collect();
        let mapped_strides: Vec<usize> = order.iter().map(|&i| old_strides[i]).collect();
        let total = self.total_dim();
        let mut out = Vec::with_capacity(total);
        let mut digits = vec![0usize; n];
        let mut old = 0usize;
        for _ in 0..total {
            out.push(old);
            // odometer increment over the new layout, tracking the old index
            for k in (0..n).rev() {
                digits[k] += 1;
                old += mapped_strides[k];
                if digits[k] < new_dims[k] {
                    break;
                }
                old -= mapped_strides[k] * new_dims[k];
                digits[k] = 0;
            }
        }
        out
    }
}

impl TryFrom<Vec<usize>> for SystemLayout {
    type Error = Error;

    fn try_from(dims: Vec<usize>) -> Result<Self> {
        SystemLayout::new(dims)
    }
}

impl From<SystemLayout> for Vec<usize> {
    fn from(layout: SystemLayout) -> Vec<usize> {
        layout.dims
    }
}

/// Two-group split of a layout. `left` is kept in the given order, `right` is
/// the ascending complement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bipartition {
    pub left: Vec<usize>,
    pub right: Vec<usize>,
}

impl Bipartition {
    pub fn new(layout: &SystemLayout, left: &[usize]) -> Result<Self> {
        layout.check_indices(left)?;
        let right = layout.complement(left);
        if right.is_empty() {
            return Err(Error::InvalidSelection(
                "bipartition leaves the right group empty".into(),
            ));
        }
        Ok(Bipartition {
            left: left.to_vec(),
            right,
        })
    }

    /// Split after the first `k` subsystems.
    pub fn at(layout: &SystemLayout, k: usize) -> Result<Self> {
        Self::new(layout, &(0..k).collect::<Vec<_>>())
    }

    pub fn order(&self) -> Vec<usize> {
        self.left.iter().chain(&self.right).copied().collect()
    }
}
