use crate::combinatorics::{for_each_sorted_index, next_permutation};

use super::{MultiIndex, SymmetricTensor};

/// Full `m^p` array. Intermediate form for contractions and outer products,
/// which are generally not symmetric before symmetrization.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseTensor {
    dim: usize,
    order: usize,
    data: Vec<f64>,
}

impl DenseTensor {
    pub fn zeros(dim: usize, order: usize) -> Self {
        Self {
            dim,
            order,
            data: vec![0.0; dim.pow(order as u32)],
        }
    }

    /// Expands stored entries to every permutation of their index.
    pub fn from_symmetric(t: &SymmetricTensor) -> Self {
        let mut out = Self::zeros(t.dim(), t.order());
        let mut idx = Vec::with_capacity(t.order());
        for (alpha, value) in t.entries() {
            idx.clear();
            idx.extend_from_slice(alpha.as_slice());
            loop {
                let flat = out.flat(&idx);
                out.data[flat] = value;
                if !next_permutation(&mut idx) {
                    break;
                }
            }
        }
        out
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    fn flat(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.order);
        idx.iter().fold(0, |acc, &k| acc * self.dim + k)
    }

    fn unflat(&self, mut flat: usize, idx: &mut [usize]) {
        for slot in idx.iter_mut().rev() {
            *slot = flat % self.dim;
            flat /= self.dim;
        }
    }

    pub fn get(&self, idx: &[usize]) -> f64 {
        self.data[self.flat(idx)]
    }

    pub fn set(&mut self, idx: &[usize], value: f64) {
        let flat = self.flat(idx);
        self.data[flat] = value;
    }

    /// Contracts the last `slots` axes of `self` with the last `slots` axes
    /// of `other`; the result keeps `self`'s leading axes then `other`'s.
    pub fn contract_trailing(&self, other: &Self, slots: usize) -> Self {
        assert_eq!(self.dim, other.dim);
        assert!(slots <= self.order.min(other.order));
        let inner = self.dim.pow(slots as u32);
        let rows = self.dim.pow((self.order - slots) as u32);
        let cols = self.dim.pow((other.order - slots) as u32);
        let mut out = Self::zeros(self.dim, self.order + other.order - 2 * slots);
        for r in 0..rows {
            let a = &self.data[r * inner..(r + 1) * inner];
            for c in 0..cols {
                let b = &other.data[c * inner..(c + 1) * inner];
                out.data[r * cols + c] = a.iter().zip(b).map(|(x, y)| x * y).sum();
            }
        }
        out
    }

    /// Reorders axes: output axis `j` is input axis `perm[j]`.
    pub fn permute_axes(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.order);
        let mut out = Self::zeros(self.dim, self.order);
        let mut out_idx = vec![0; self.order];
        let mut in_idx = vec![0; self.order];
        for flat in 0..out.data.len() {
            out.unflat(flat, &mut out_idx);
            for (j, &axis) in perm.iter().enumerate() {
                in_idx[axis] = out_idx[j];
            }
            out.data[flat] = self.get(&in_idx);
        }
        out
    }

    /// Average over all permutations of the axes.
    pub fn symmetrize(&self) -> SymmetricTensor {
        let mut out = SymmetricTensor::zeros(self.dim, self.order);
        let mut perm = Vec::with_capacity(self.order);
        for_each_sorted_index(self.dim, self.order, |alpha| {
            perm.clear();
            perm.extend_from_slice(alpha);
            let mut sum = 0.0;
            let mut count = 0u64;
            loop {
                sum += self.get(&perm);
                count += 1;
                if !next_permutation(&mut perm) {
                    break;
                }
            }
            out.insert_unchecked(MultiIndex(alpha.to_vec()), sum / count as f64);
        });
        out
    }

    /// Averages separately over permutations inside each consecutive block
    /// of axes; `blocks` are the block lengths and must sum to the order.
    pub fn symmetrize_blocks(&self, blocks: &[usize]) -> Self {
        assert_eq!(blocks.iter().sum::<usize>(), self.order);
        let mut bounds = Vec::with_capacity(blocks.len());
        let mut start = 0;
        for &len in blocks {
            bounds.push((start, start + len));
            start += len;
        }
        let mut out = Self::zeros(self.dim, self.order);
        let mut idx = vec![0; self.order];
        let mut orbit = Vec::new();
        for flat in 0..self.data.len() {
            self.unflat(flat, &mut idx);
            let block_sorted = bounds
                .iter()
                .all(|&(lo, hi)| idx[lo..hi].windows(2).all(|w| w[0] <= w[1]));
            if !block_sorted {
                continue;
            }
            orbit.clear();
            collect_block_orbit(&mut idx.clone(), &bounds, 0, &mut orbit, self);
            let mean = orbit.iter().map(|&f| self.data[f]).sum::<f64>() / orbit.len() as f64;
            for &f in &orbit {
                out.data[f] = mean;
            }
        }
        out
    }

    pub fn scaled(&self, a: f64) -> Self {
        Self {
            dim: self.dim,
            order: self.order,
            data: self.data.iter().map(|v| a * v).collect(),
        }
    }

    pub fn axpy(&mut self, a: f64, other: &Self) {
        assert_eq!((self.dim, self.order), (other.dim, other.order));
        for (x, y) in self.data.iter_mut().zip(&other.data) {
            *x += a * y;
        }
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.dim, self.order), (other.dim, other.order));
        self.data
            .iter()
            .zip(&other.data)
            .fold(0.0, |m, (x, y)| m.max((x - y).abs()))
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

fn collect_block_orbit(
    idx: &mut [usize],
    bounds: &[(usize, usize)],
    block: usize,
    orbit: &mut Vec<usize>,
    t: &DenseTensor,
) {
    if block == bounds.len() {
        orbit.push(t.flat(idx));
        return;
    }
    let (lo, hi) = bounds[block];
    let saved = idx[lo..hi].to_vec();
    loop {
        collect_block_orbit(idx, bounds, block + 1, orbit, t);
        if !next_permutation(&mut idx[lo..hi]) {
            break;
        }
    }
    idx[lo..hi].copy_from_slice(&saved);
}
