//! Symmetric tensors over an `m`-dimensional orthonormal coordinate model of
//! the Cameron–Martin space.
//!
//! A [`SymmetricTensor`] stores one value per sorted multi-index. The full
//! tensor entry at any permutation of a stored index equals the stored value;
//! no multinomial weight is folded into storage. Pairings therefore weight
//! each stored entry by [`perm_count`].
//!
//! Indices are 0-based in memory and 1-based in the JSON file format.

mod dense;
mod json;

pub use dense::DenseTensor;
pub use json::TensorFile;

use std::collections::BTreeMap;
use std::fmt;

use crate::combinatorics::{for_each_sorted_index, multiset_permutations};
use crate::error::{ChaosError, Result};

/// Sorted (nondecreasing) tuple of basis indices.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct MultiIndex(Vec<usize>);

impl MultiIndex {
    /// Builds a multi-index from any arrangement of indices.
    pub fn new(mut indices: Vec<usize>) -> Self {
        indices.sort_unstable();
        Self(indices)
    }

    /// Accepts `indices` only if already nondecreasing.
    pub fn from_sorted(indices: Vec<usize>) -> Result<Self> {
        if indices.windows(2).any(|w| w[0] > w[1]) {
            return Err(ChaosError::InvalidIndex {
                index: indices,
                reason: "indices must be nondecreasing".into(),
            });
        }
        Ok(Self(indices))
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Multiplicity of each basis index `0..dim`.
    pub fn counts(&self, dim: usize) -> Vec<usize> {
        let mut counts = vec![0; dim];
        for &k in &self.0 {
            counts[k] += 1;
        }
        counts
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// Number of distinct permutations of `alpha`: `p! / prod(multiplicity!)`.
pub fn perm_count(alpha: &MultiIndex) -> u64 {
    multiset_permutations(alpha.as_slice())
}

/// Order-`p` symmetric kernel `f` in `H^{⊗̂p}`.
#[derive(Clone, PartialEq)]
pub struct SymmetricTensor {
    dim: usize,
    order: usize,
    entries: BTreeMap<MultiIndex, f64>,
}

impl fmt::Debug for SymmetricTensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SymmetricTensor")
            .field("dim", &self.dim)
            .field("order", &self.order)
            .field("entries", &self.entries)
            .finish()
    }
}

impl SymmetricTensor {
    pub fn zeros(dim: usize, order: usize) -> Self {
        Self {
            dim,
            order,
            entries: BTreeMap::new(),
        }
    }

    pub fn scalar(dim: usize, value: f64) -> Self {
        let mut t = Self::zeros(dim, 0);
        t.insert_unchecked(MultiIndex::default(), value);
        t
    }

    /// Basis vector `e_k` (order 1).
    pub fn basis(dim: usize, k: usize) -> Self {
        assert!(k < dim, "basis index {k} out of range for dim {dim}");
        let mut t = Self::zeros(dim, 1);
        t.insert_unchecked(MultiIndex(vec![k]), 1.0);
        t
    }

    /// Order-1 tensor with the given coordinates.
    pub fn vector(coords: &[f64]) -> Self {
        let mut t = Self::zeros(coords.len(), 1);
        for (k, &v) in coords.iter().enumerate() {
            t.insert_unchecked(MultiIndex(vec![k]), v);
        }
        t
    }

    /// Validated construction from `(index, value)` pairs. Indices must be
    /// sorted, in range, of length `order`, and unique.
    pub fn from_entries(
        dim: usize,
        order: usize,
        entries: impl IntoIterator<Item = (MultiIndex, f64)>,
    ) -> Result<Self> {
        if dim == 0 {
            return Err(ChaosError::ZeroDim(dim));
        }
        let mut t = Self::zeros(dim, order);
        for (alpha, value) in entries {
            t.check_index(&alpha)?;
            if !value.is_finite() {
                return Err(ChaosError::NonFinite(value));
            }
            if t.entries.contains_key(&alpha) {
                return Err(ChaosError::InvalidIndex {
                    index: alpha.0,
                    reason: "duplicate index".into(),
                });
            }
            t.insert_unchecked(alpha, value);
        }
        Ok(t)
    }

    fn check_index(&self, alpha: &MultiIndex) -> Result<()> {
        if alpha.len() != self.order {
            return Err(ChaosError::InvalidIndex {
                index: alpha.0.clone(),
                reason: format!("length differs from order {}", self.order),
            });
        }
        if alpha.0.iter().any(|&k| k >= self.dim) {
            return Err(ChaosError::InvalidIndex {
                index: alpha.0.clone(),
                reason: format!("index out of range for dim {}", self.dim),
            });
        }
        Ok(())
    }

    fn insert_unchecked(&mut self, alpha: MultiIndex, value: f64) {
        if value == 0.0 {
            self.entries.remove(&alpha);
        } else {
            self.entries.insert(alpha, value);
        }
    }

    /// Sets the value at any arrangement of `indices`.
    pub fn set(&mut self, indices: &[usize], value: f64) -> Result<()> {
        let alpha = MultiIndex::new(indices.to_vec());
        self.check_index(&alpha)?;
        if !value.is_finite() {
            return Err(ChaosError::NonFinite(value));
        }
        self.insert_unchecked(alpha, value);
        Ok(())
    }

    /// Full-tensor entry at any arrangement of `indices`.
    pub fn get(&self, indices: &[usize]) -> f64 {
        let alpha = MultiIndex::new(indices.to_vec());
        self.entries.get(&alpha).copied().unwrap_or(0.0)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Number of stored (nonzero) entries.
    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&MultiIndex, f64)> + '_ {
        self.entries.iter().map(|(k, &v)| (k, v))
    }

    /// Value of an order-0 tensor.
    pub fn scalar_value(&self) -> f64 {
        debug_assert_eq!(self.order, 0);
        self.entries.values().next().copied().unwrap_or(0.0)
    }

    /// `h^{⊗n}` for an order-1 tensor `h`.
    pub fn tensor_power(h: &SymmetricTensor, n: usize) -> Self {
        assert_eq!(h.order, 1, "tensor_power expects an order-1 tensor");
        let coords: Vec<f64> = (0..h.dim).map(|k| h.get(&[k])).collect();
        let mut t = Self::zeros(h.dim, n);
        for_each_sorted_index(h.dim, n, |idx| {
            let value: f64 = idx.iter().map(|&k| coords[k]).product();
            t.insert_unchecked(MultiIndex(idx.to_vec()), value);
        });
        t
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim || self.order != other.order {
            return Err(ChaosError::ShapeMismatch {
                left_dim: self.dim,
                left_order: self.order,
                right_dim: other.dim,
                right_order: other.order,
            });
        }
        Ok(())
    }

    /// Frobenius pairing of the full tensors.
    pub fn inner_product(&self, other: &Self) -> Result<f64> {
        self.check_same_shape(other)?;
        let (small, large) = if self.nnz() <= other.nnz() {
            (self, other)
        } else {
            (other, self)
        };
        Ok(small
            .entries
            .iter()
            .filter_map(|(alpha, &a)| {
                large
                    .entries
                    .get(alpha)
                    .map(|&b| perm_count(alpha) as f64 * a * b)
            })
            .sum())
    }

    pub fn norm(&self) -> f64 {
        self.inner_product(self).unwrap_or(0.0).sqrt()
    }

    /// `f ⊗ g` as a dense order `p + q` tensor.
    pub fn outer(&self, other: &Self) -> Result<DenseTensor> {
        self.contract(other, 0)
    }

    /// `f ⊗_i g`: contracts the last `i` slots of `f` against the last `i`
    /// slots of `g`. Output layout is `(t_1..t_{p-i}, s_1..s_{q-i})`.
    pub fn contract(&self, other: &Self, slots: usize) -> Result<DenseTensor> {
        if self.dim != other.dim {
            return Err(ChaosError::DimMismatch(self.dim, other.dim));
        }
        let max = self.order.min(other.order);
        if slots > max {
            return Err(ChaosError::ContractionOutOfRange { slots, max });
        }
        let a = DenseTensor::from_symmetric(self);
        let b = DenseTensor::from_symmetric(other);
        Ok(a.contract_trailing(&b, slots))
    }

    /// Entrywise `a * f + b * g`.
    pub fn scale_add(a: f64, f: &Self, b: f64, g: &Self) -> Result<Self> {
        f.check_same_shape(g)?;
        let mut out = Self::zeros(f.dim, f.order);
        for (alpha, &v) in &f.entries {
            out.entries.insert(alpha.clone(), a * v);
        }
        for (alpha, &v) in &g.entries {
            *out.entries.entry(alpha.clone()).or_insert(0.0) += b * v;
        }
        out.entries.retain(|_, v| *v != 0.0);
        Ok(out)
    }

    pub fn scaled(&self, a: f64) -> Self {
        let mut out = Self::zeros(self.dim, self.order);
        for (alpha, &v) in &self.entries {
            out.insert_unchecked(alpha.clone(), a * v);
        }
        out
    }

    /// Adds `a * other` in place.
    pub fn axpy(&mut self, a: f64, other: &Self) -> Result<()> {
        self.check_same_shape(other)?;
        for (alpha, &v) in &other.entries {
            *self.entries.entry(alpha.clone()).or_insert(0.0) += a * v;
        }
        self.entries.retain(|_, v| *v != 0.0);
        Ok(())
    }

    /// Largest absolute entrywise difference (absent entries count as zero).
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.check_same_shape(other)?;
        let mut diff: f64 = 0.0;
        for (alpha, &v) in &self.entries {
            let w = other.entries.get(alpha).copied().unwrap_or(0.0);
            diff = diff.max((v - w).abs());
        }
        for (alpha, &w) in &other.entries {
            if !self.entries.contains_key(alpha) {
                diff = diff.max(w.abs());
            }
        }
        Ok(diff)
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.values().fold(0.0, |m, v| m.max(v.abs()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn idx(v: &[usize]) -> MultiIndex {
        MultiIndex::new(v.to_vec())
    }

    /// sym(e_a, e_b) = (e_a ⊗ e_b + e_b ⊗ e_a) / 2
    fn sym_pair(dim: usize, a: usize, b: usize) -> SymmetricTensor {
        let mut t = SymmetricTensor::zeros(dim, 2);
        t.set(&[a, b], 0.5).unwrap();
        t
    }

    #[test]
    fn perm_count_examples() {
        assert_eq!(perm_count(&idx(&[0, 1])), 2);
        assert_eq!(perm_count(&idx(&[0, 0])), 1);
        assert_eq!(perm_count(&idx(&[0, 0, 1])), 3);
    }

    #[test]
    fn inner_product_examples() {
        let mut f = SymmetricTensor::zeros(2, 2);
        f.set(&[0, 0], 1.0).unwrap();
        assert_eq!(f.inner_product(&f).unwrap(), 1.0);

        let g = sym_pair(2, 0, 1);
        assert_eq!(g.inner_product(&g).unwrap(), 0.5);

        let a = SymmetricTensor::scalar(3, 2.5);
        let b = SymmetricTensor::scalar(3, -4.0);
        assert_eq!(a.inner_product(&b).unwrap(), -10.0);
    }

    #[test]
    fn inner_product_rejects_shape_mismatch() {
        let a = SymmetricTensor::basis(2, 0);
        let b = SymmetricTensor::basis(3, 0);
        assert!(matches!(
            a.inner_product(&b),
            Err(ChaosError::ShapeMismatch { .. })
        ));
        let c = sym_pair(2, 0, 1);
        assert!(a.inner_product(&c).is_err());
    }

    #[test]
    fn outer_examples() {
        let e1 = SymmetricTensor::basis(2, 0);
        let t = e1.outer(&e1).unwrap();
        assert_eq!(t.get(&[0, 0]), 1.0);
        assert_eq!(t.get(&[0, 1]), 0.0);
        assert_eq!(t.get(&[1, 1]), 0.0);

        let mut f = SymmetricTensor::zeros(2, 2);
        f.set(&[0, 1], 0.3).unwrap();
        f.set(&[1, 1], -0.7).unwrap();
        let scaled = SymmetricTensor::scalar(2, 2.0).outer(&f).unwrap();
        assert_eq!(scaled, DenseTensor::from_symmetric(&f.scaled(2.0)));

        let t = sym_pair(2, 0, 1).outer(&e1).unwrap();
        assert_eq!(t.get(&[0, 1, 0]), 0.5);
        assert_eq!(t.get(&[1, 0, 0]), 0.5);
        let nonzero = t.data().iter().filter(|v| **v != 0.0).count();
        assert_eq!(nonzero, 2);
    }

    #[test]
    fn contract_examples() {
        let mut e11 = SymmetricTensor::zeros(2, 2);
        e11.set(&[0, 0], 1.0).unwrap();
        let full = e11.contract(&e11, 2).unwrap();
        assert_eq!(full.order(), 0);
        assert_eq!(full.data(), &[1.0]);

        let t = e11.contract(&sym_pair(2, 0, 1), 1).unwrap();
        assert_eq!(t.get(&[0, 1]), 0.5);
        assert_eq!(t.get(&[1, 0]), 0.0);
        assert_eq!(t.get(&[0, 0]), 0.0);
        assert_eq!(t.get(&[1, 1]), 0.0);

        let g = sym_pair(2, 0, 1);
        assert_eq!(e11.contract(&g, 0).unwrap(), e11.outer(&g).unwrap());
    }

    #[test]
    fn contract_rejects_bad_slots() {
        let e1 = SymmetricTensor::basis(2, 0);
        assert!(matches!(
            e1.contract(&e1, 2),
            Err(ChaosError::ContractionOutOfRange { slots: 2, max: 1 })
        ));
        assert!(matches!(
            e1.contract(&SymmetricTensor::basis(3, 0), 1),
            Err(ChaosError::DimMismatch(2, 3))
        ));
    }

    #[test]
    fn symmetrize_examples() {
        let mut t = DenseTensor::zeros(2, 2);
        t.set(&[0, 1], 0.5);
        let s = t.symmetrize();
        assert_eq!(s.get(&[0, 1]), 0.25);
        assert_eq!(s.nnz(), 1);

        let v = SymmetricTensor::vector(&[1.0, -2.0]);
        assert_eq!(DenseTensor::from_symmetric(&v).symmetrize(), v);

        let mut f = SymmetricTensor::zeros(3, 3);
        f.set(&[0, 1, 2], 0.25).unwrap();
        f.set(&[1, 1, 2], -1.5).unwrap();
        assert_eq!(DenseTensor::from_symmetric(&f).symmetrize(), f);
    }

    #[test]
    fn scale_add_examples() {
        let f = sym_pair(3, 0, 2);
        let g = sym_pair(3, 1, 1);
        assert_eq!(SymmetricTensor::scale_add(1.0, &f, 0.0, &g).unwrap(), f);
        assert!(SymmetricTensor::scale_add(1.0, &f, -1.0, &f)
            .unwrap()
            .is_zero());
        let e1 = SymmetricTensor::basis(2, 0);
        let e2 = SymmetricTensor::basis(2, 1);
        let v = SymmetricTensor::scale_add(2.0, &e1, 3.0, &e2).unwrap();
        assert_eq!(v, SymmetricTensor::vector(&[2.0, 3.0]));
        assert!(SymmetricTensor::scale_add(1.0, &f, 1.0, &e1).is_err());
    }

    #[test]
    fn from_entries_validates() {
        assert!(SymmetricTensor::from_entries(2, 2, [(idx(&[0, 2]), 1.0)]).is_err());
        assert!(SymmetricTensor::from_entries(2, 2, [(idx(&[0]), 1.0)]).is_err());
        assert!(SymmetricTensor::from_entries(2, 1, [(idx(&[0]), f64::NAN)]).is_err());
        assert!(SymmetricTensor::from_entries(2, 1, [(idx(&[0]), 1.0), (idx(&[0]), 2.0)]).is_err());
        assert!(MultiIndex::from_sorted(vec![1, 0]).is_err());
        assert!(SymmetricTensor::from_entries(0, 0, []).is_err());
    }

    #[test]
    fn tensor_power_values() {
        let h = SymmetricTensor::vector(&[0.6, 0.8]);
        let h3 = SymmetricTensor::tensor_power(&h, 3);
        assert_abs_diff_eq!(h3.get(&[1, 0, 1]), 0.6 * 0.8 * 0.8, epsilon = 1e-15);
        assert_abs_diff_eq!(h3.norm(), 1.0, epsilon = 1e-14);
        assert_eq!(SymmetricTensor::tensor_power(&h, 0).scalar_value(), 1.0);
    }
}
