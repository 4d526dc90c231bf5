//! Random test inputs: coefficients uniform in `[-1, 1]`.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::chaos::ChaosExpansion;
use crate::combinatorics::for_each_sorted_index;
use crate::symtensor::{MultiIndex, SymmetricTensor};

/// Every sorted entry drawn uniformly from `[-1, 1]`.
pub fn random_symmetric<R: Rng + ?Sized>(rng: &mut R, dim: usize, order: usize) -> SymmetricTensor {
    let mut entries = Vec::new();
    for_each_sorted_index(dim, order, |idx| {
        entries.push((MultiIndex::new(idx.to_vec()), rng.random_range(-1.0..=1.0)));
    });
    SymmetricTensor::from_entries(dim, order, entries).expect("valid random tensor")
}

/// Random expansion whose top order is uniform in `0..=max_order`; lower
/// orders are each present with probability 1/2.
pub fn random_expansion<R: Rng + ?Sized>(
    rng: &mut R,
    dim: usize,
    max_order: usize,
) -> ChaosExpansion {
    let top = rng.random_range(0..=max_order);
    random_expansion_with_top(rng, dim, top)
}

pub fn random_expansion_with_top<R: Rng + ?Sized>(
    rng: &mut R,
    dim: usize,
    top: usize,
) -> ChaosExpansion {
    let mut out = ChaosExpansion::zero(dim);
    for n in 0..=top {
        if n == top || rng.random_bool(0.5) {
            out.add_kernel(1.0, &random_symmetric(rng, dim, n))
                .expect("shared dim");
        }
    }
    out
}

pub fn random_vector<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> SymmetricTensor {
    let coords: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..=1.0)).collect();
    SymmetricTensor::vector(&coords)
}

/// Uniformly distributed direction on the unit sphere.
pub fn random_unit_vector<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> SymmetricTensor {
    loop {
        let coords: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
        let norm = coords.iter().map(|c| c * c).sum::<f64>().sqrt();
        if norm > 1e-3 {
            let unit: Vec<f64> = coords.iter().map(|c| c / norm).collect();
            return SymmetricTensor::vector(&unit);
        }
    }
}

pub fn standard_normals<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.sample(StandardNormal)).collect()
}
