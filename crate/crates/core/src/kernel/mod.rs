//! Piecewise-constant kernels on finite partitions.
//!
//! A kernel of order `q` is stored as a dense row-major tensor of shape
//! `N^q`: entry `(i_1, …, i_q)` is the value of `f` on `B_{i_1} × … × B_{i_q}`.
//! Integrals against `μ^q` become sums weighted by products of cell masses.

mod index;
pub(crate) mod io;
mod ops;
mod random;

pub use index::MultiIndex;
pub use io::{read_kernel, write_kernel};
pub use ops::{
    contract, from_index_function, inner, l2_norm, l4_norm, lincomb, symmetrize,
    symmetrize_exhaustive, EXHAUSTIVE_SYMMETRIZATION_CAP, SYMMETRIZATION_CAP,
};
pub use random::{random_partition, random_symmetric, SignMode};

use crate::{Error, Result};

/// Largest dense tensor the crate will allocate.
pub const MAX_ENTRIES: usize = 1 << 24;

/// Number of entries of an order-`order` tensor over `n` cells, guarded by
/// [`MAX_ENTRIES`].
pub fn tensor_len(n: usize, order: usize) -> Result<usize> {
    n.checked_pow(order as u32)
        .filter(|&len| len <= MAX_ENTRIES)
        .ok_or_else(|| {
            Error::Guard(format!(
                "dense tensor of order {order} over {n} cells exceeds {MAX_ENTRIES} entries"
            ))
        })
}

/// Cell measures `μ(B_1), …, μ(B_N)` of a finite partition together with the
/// uniform lower bound `α`.
#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    masses: Vec<f64>,
    alpha: f64,
}

impl Partition {
    /// Requires `N ≥ 1` and `m_i > α > 0` for every cell.
    pub fn new(masses: Vec<f64>, alpha: f64) -> Result<Self> {
        if masses.is_empty() {
            return Err(Error::InvalidPartition("at least one cell is required".into()));
        }
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(Error::InvalidPartition(format!("alpha must be positive, got {alpha}")));
        }
        if let Some((i, m)) = masses
            .iter()
            .enumerate()
            .find(|(_, m)| !(m.is_finite() && **m > alpha))
        {
            return Err(Error::InvalidPartition(format!(
                "mass of cell {i} is {m}, expected a finite value above alpha = {alpha}"
            )));
        }
        Ok(Self { masses, alpha })
    }

    /// Partition with `α` set to half the smallest mass.
    pub fn with_masses(masses: Vec<f64>) -> Result<Self> {
        let min = masses.iter().copied().fold(f64::INFINITY, f64::min);
        let alpha = if min.is_finite() && min > 0.0 { 0.5 * min } else { min };
        Self::new(masses, alpha)
    }

    /// `n` cells of unit mass.
    pub fn unit(n: usize) -> Self {
        assert!(n >= 1, "a partition needs at least one cell");
        Self { masses: vec![1.0; n], alpha: 0.5 }
    }

    pub fn len(&self) -> usize {
        self.masses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masses.is_empty()
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn total_mass(&self) -> f64 {
        self.masses.iter().sum()
    }

    /// `∏_k m_{i_k}` for every multi-index of the given order, row-major.
    pub fn product_weights(&self, order: usize) -> Result<Vec<f64>> {
        let len = tensor_len(self.len(), order)?;
        let mut w = Vec::with_capacity(len);
        w.push(1.0);
        for _ in 0..order {
            let prev = std::mem::take(&mut w);
            w.reserve(prev.len() * self.len());
            for p in prev {
                w.extend(self.masses.iter().map(|m| p * m));
            }
        }
        Ok(w)
    }
}

/// A function on `Z^q` that is constant on products of partition cells.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseKernel {
    order: usize,
    partition: Partition,
    values: Vec<f64>,
}

impl PiecewiseKernel {
    pub fn new(order: usize, partition: Partition, values: Vec<f64>) -> Result<Self> {
        let len = tensor_len(partition.len(), order)?;
        if values.len() != len {
            return Err(Error::Dimension(format!(
                "order {order} over {} cells needs {len} values, got {}",
                partition.len(),
                values.len()
            )));
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::NonFinite(format!("kernel value {v}")));
        }
        Ok(Self { order, partition, values })
    }

    pub fn zeros(order: usize, partition: Partition) -> Result<Self> {
        let len = tensor_len(partition.len(), order)?;
        Ok(Self { order, partition, values: vec![0.0; len] })
    }

    /// Order-0 kernel.
    pub fn scalar(partition: Partition, value: f64) -> Self {
        Self { order: 0, partition, values: vec![value] }
    }

    pub fn from_fn(
        order: usize,
        partition: Partition,
        mut f: impl FnMut(&[usize]) -> f64,
    ) -> Result<Self> {
        let len = tensor_len(partition.len(), order)?;
        let mut values = Vec::with_capacity(len);
        let mut idx = MultiIndex::new(partition.len(), order);
        for _ in 0..len {
            values.push(f(idx.current()));
            idx.advance();
        }
        Self::new(order, partition, values)
    }

    pub(crate) fn from_parts_unchecked(order: usize, partition: Partition, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), partition.len().pow(order as u32));
        Self { order, partition, values }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Number of partition cells `N`.
    pub fn size(&self) -> usize {
        self.partition.len()
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn get(&self, idx: &[usize]) -> Result<f64> {
        if idx.len() != self.order {
            return Err(Error::IndexRange(format!(
                "expected {} indices, got {}",
                self.order,
                idx.len()
            )));
        }
        let n = self.size();
        let mut flat = 0;
        for &i in idx {
            if i >= n {
                return Err(Error::IndexRange(format!("cell {i} with N = {n}")));
            }
            flat = flat * n + i;
        }
        Ok(self.values[flat])
    }

    /// Value of an order-0 kernel.
    pub fn as_scalar(&self) -> Option<f64> {
        (self.order == 0).then(|| self.values[0])
    }

    pub fn scale(&self, c: f64) -> Self {
        Self {
            order: self.order,
            partition: self.partition.clone(),
            values: self.values.iter().map(|v| c * v).collect(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Largest deviation `|f(i) − f(i_π)|` over adjacent transpositions, which
    /// generate the full permutation group.
    pub fn asymmetry(&self) -> f64 {
        let n = self.size();
        let q = self.order;
        if q < 2 {
            return 0.0;
        }
        let mut worst = 0.0f64;
        let mut idx = MultiIndex::new(n, q);
        let mut swapped = vec![0usize; q];
        for flat in 0..self.values.len() {
            let cur = idx.current();
            for k in 0..q - 1 {
                if cur[k] == cur[k + 1] {
                    continue;
                }
                swapped.copy_from_slice(cur);
                swapped.swap(k, k + 1);
                let other = index::encode(&swapped, n);
                worst = worst.max((self.values[flat] - self.values[other]).abs());
            }
            idx.advance();
        }
        worst
    }

    /// Symmetric up to `tol · max|f|`.
    pub fn is_symmetric(&self, tol: f64) -> bool {
        self.asymmetry() <= tol * self.max_abs().max(f64::MIN_POSITIVE)
    }

    pub fn ensure_symmetric(&self) -> Result<()> {
        let a = self.asymmetry();
        if a > 1e-12 * self.max_abs().max(f64::MIN_POSITIVE) {
            return Err(Error::NotSymmetric(a));
        }
        Ok(())
    }

    /// `Some(true)` when `f ≥ 0`, `Some(false)` when `f ≤ 0` (a zero kernel
    /// counts as non-negative), `None` for sign-changing kernels. Entries
    /// within `1e-14` of zero are ignored.
    pub fn sign_constancy(&self) -> Option<bool> {
        const EPS: f64 = 1e-14;
        let min = self.values.iter().copied().fold(f64::INFINITY, f64::min);
        let max = self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if min >= -EPS {
            Some(true)
        } else if max <= EPS {
            Some(false)
        } else {
            None
        }
    }
}

/// Symmetric array on `{1..N}^q` vanishing on all diagonals.
#[derive(Debug, Clone, PartialEq)]
pub struct IndexFunction {
    order: usize,
    size: usize,
    values: Vec<f64>,
}

impl IndexFunction {
    pub fn new(order: usize, size: usize, values: Vec<f64>) -> Result<Self> {
        let len = tensor_len(size, order)?;
        if size == 0 {
            return Err(Error::Dimension("index function over zero cells".into()));
        }
        if values.len() != len {
            return Err(Error::Dimension(format!(
                "order {order}, size {size} needs {len} values, got {}",
                values.len()
            )));
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::NonFinite(format!("index function value {v}")));
        }
        let h = Self { order, size, values };
        h.validate()?;
        Ok(h)
    }

    pub fn from_fn(order: usize, size: usize, mut f: impl FnMut(&[usize]) -> f64) -> Result<Self> {
        let len = tensor_len(size, order)?;
        let mut values = Vec::with_capacity(len);
        let mut idx = MultiIndex::new(size, order);
        for _ in 0..len {
            values.push(f(idx.current()));
            idx.advance();
        }
        Self::new(order, size, values)
    }

    pub fn zeros(order: usize, size: usize) -> Result<Self> {
        Self::new(order, size, vec![0.0; tensor_len(size, order)?])
    }

    fn validate(&self) -> Result<()> {
        let scale = self
            .values
            .iter()
            .fold(0.0f64, |m, v| m.max(v.abs()))
            .max(f64::MIN_POSITIVE);
        let mut idx = MultiIndex::new(self.size, self.order);
        let mut swapped = vec![0usize; self.order];
        for flat in 0..self.values.len() {
            let cur = idx.current();
            let v = self.values[flat];
            if index::has_repeat(cur) && v != 0.0 {
                return Err(Error::DiagonalSupport(v));
            }
            for k in 0..self.order.saturating_sub(1) {
                swapped.copy_from_slice(cur);
                swapped.swap(k, k + 1);
                let d = (v - self.values[index::encode(&swapped, self.size)]).abs();
                if d > 1e-12 * scale {
                    return Err(Error::NotSymmetric(d));
                }
            }
            idx.advance();
        }
        Ok(())
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, idx: &[usize]) -> f64 {
        self.values[index::encode(idx, self.size)]
    }

    /// `‖h‖_(N,q)`.
    pub fn norm(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn negate(&self) -> Self {
        Self {
            order: self.order,
            size: self.size,
            values: self.values.iter().map(|v| -v).collect(),
        }
    }

    pub fn scale(&self, c: f64) -> Self {
        Self {
            order: self.order,
            size: self.size,
            values: self.values.iter().map(|v| c * v).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partition_rules() {
        assert!(Partition::new(vec![], 0.1).is_err());
        assert!(Partition::new(vec![1.0, 0.05], 0.1).is_err());
        assert!(Partition::new(vec![1.0, f64::INFINITY], 0.1).is_err());
        assert!(Partition::new(vec![1.0], 0.0).is_err());
        let p = Partition::with_masses(vec![2.0, 3.0]).unwrap();
        assert_eq!(p.alpha(), 1.0);
        assert_eq!(p.product_weights(2).unwrap(), vec![4.0, 6.0, 6.0, 9.0]);
        assert_eq!(p.product_weights(0).unwrap(), vec![1.0]);
    }

    #[test]
    fn guard_on_huge_tensors() {
        assert!(matches!(PiecewiseKernel::zeros(9, Partition::unit(8)), Err(Error::Guard(_))));
        assert!(tensor_len(usize::MAX, 3).is_err());
    }

    #[test]
    fn kernel_access_and_checks() {
        let f = PiecewiseKernel::new(2, Partition::unit(2), vec![0.0, 1.0, 2.0, 0.0]).unwrap();
        assert_eq!(f.get(&[1, 0]).unwrap(), 2.0);
        assert!(f.get(&[2, 0]).is_err());
        assert!(f.get(&[0]).is_err());
        assert!(!f.is_symmetric(1e-12));
        assert!(matches!(f.ensure_symmetric(), Err(Error::NotSymmetric(_))));
        assert_eq!(f.sign_constancy(), Some(true));
        assert_eq!(f.scale(-1.0).sign_constancy(), Some(false));
        assert!(PiecewiseKernel::new(1, Partition::unit(2), vec![f64::NAN, 0.0]).is_err());
        assert!(PiecewiseKernel::new(1, Partition::unit(2), vec![0.0]).is_err());
    }

    #[test]
    fn index_function_rules() {
        assert!(matches!(
            IndexFunction::new(2, 2, vec![1.0, 0.5, 0.5, 0.0]),
            Err(Error::DiagonalSupport(_))
        ));
        assert!(matches!(
            IndexFunction::new(2, 2, vec![0.0, 0.5, 0.4, 0.0]),
            Err(Error::NotSymmetric(_))
        ));
        let h = IndexFunction::new(2, 2, vec![0.0, 0.5, 0.5, 0.0]).unwrap();
        assert!((h.norm() - 0.5f64.sqrt()).abs() < 1e-15);
        assert_eq!(h.negate().get(&[0, 1]), -0.5);
    }
}
