use std::collections::BTreeMap;

use crate::combinatorics::{binomial, factorial, for_each_submultiset, product_coefficient};
use crate::error::{ChaosError, Result};
use crate::hermite::HermiteTable;
use crate::symtensor::{perm_count, DenseTensor, MultiIndex, SymmetricTensor};

use super::{wick_monomial, ChaosExpansion, GaussianSample};

/// Chaos expansion with `k` free `H`-slots, e.g. `∇^k φ`. The kernel stored
/// at chaos order `n` has order `n + k` and is symmetric in all its slots.
#[derive(Clone, Debug, PartialEq)]
pub struct GradedChaos {
    dim: usize,
    free_slots: usize,
    terms: BTreeMap<usize, SymmetricTensor>,
}

impl GradedChaos {
    pub fn from_chaos(f: &ChaosExpansion) -> Self {
        Self {
            dim: f.dim(),
            free_slots: 0,
            terms: f.terms().map(|(n, k)| (n, k.clone())).collect(),
        }
    }

    /// Deterministic `H^{⊗k}`-valued element holding `eta`.
    pub fn constant(eta: SymmetricTensor) -> Self {
        let mut terms = BTreeMap::new();
        let (dim, free_slots) = (eta.dim(), eta.order());
        if !eta.is_zero() {
            terms.insert(0, eta);
        }
        Self {
            dim,
            free_slots,
            terms,
        }
    }

    /// Back to a scalar expansion when no free slots remain.
    pub fn to_chaos(&self) -> Option<ChaosExpansion> {
        if self.free_slots != 0 {
            return None;
        }
        Some(
            ChaosExpansion::from_terms(self.dim, self.terms.values().cloned())
                .expect("kernels share dim"),
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn free_slots(&self) -> usize {
        self.free_slots
    }

    pub fn term(&self, n: usize) -> Option<&SymmetricTensor> {
        self.terms.get(&n)
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, &SymmetricTensor)> + '_ {
        self.terms.iter().map(|(&n, f)| (n, f))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `E[·]`: the order-0 part, an order-`k` tensor.
    pub fn expectation(&self) -> SymmetricTensor {
        self.terms
            .get(&0)
            .cloned()
            .unwrap_or_else(|| SymmetricTensor::zeros(self.dim, self.free_slots))
    }

    /// `∇I_p(f) = p I_{p-1}(f)` with one slot of `f` freed.
    pub fn gradient(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(&n, _)| n > 0)
            .map(|(&n, f)| (n - 1, f.scaled(n as f64)))
            .collect();
        Self {
            dim: self.dim,
            free_slots: self.free_slots + 1,
            terms,
        }
    }

    pub fn gradient_n(&self, n: usize) -> Self {
        (0..n).fold(self.clone(), |acc, _| acc.gradient())
    }

    /// `δ`: integrates one free slot, raising the chaos order by one.
    pub fn divergence(&self) -> Result<Self> {
        if self.free_slots == 0 {
            return Err(ChaosError::NoFreeSlot);
        }
        // kernels are fully symmetric, so symmetrizing over the n + 1
        // integrated slots leaves them unchanged
        Ok(Self {
            dim: self.dim,
            free_slots: self.free_slots - 1,
            terms: self
                .terms
                .iter()
                .map(|(&n, f)| (n + 1, f.clone()))
                .collect(),
        })
    }

    pub fn scaled(&self, a: f64) -> Self {
        Self {
            dim: self.dim,
            free_slots: self.free_slots,
            terms: self
                .terms
                .iter()
                .map(|(&n, f)| (n, f.scaled(a)))
                .filter(|(_, f)| !f.is_zero())
                .collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim || self.free_slots != other.free_slots {
            return Err(ChaosError::ShapeMismatch {
                left_dim: self.dim,
                left_order: self.free_slots,
                right_dim: other.dim,
                right_order: other.free_slots,
            });
        }
        let mut terms = self.terms.clone();
        for (&n, g) in &other.terms {
            let sum = match terms.get(&n) {
                Some(f) => SymmetricTensor::scale_add(1.0, f, 1.0, g)?,
                None => g.clone(),
            };
            if sum.is_zero() {
                terms.remove(&n);
            } else {
                terms.insert(n, sum);
            }
        }
        Ok(Self {
            terms,
            ..self.clone()
        })
    }

    /// Pathwise value: the `H^{⊗k}` tensor at the Gaussian sample `x`.
    pub fn evaluate(&self, x: &GaussianSample) -> Result<SymmetricTensor> {
        if x.len() != self.dim {
            return Err(ChaosError::SampleLength {
                expected: self.dim,
                got: x.len(),
            });
        }
        let max_chaos = self.terms.keys().next_back().copied().unwrap_or(0);
        let table = HermiteTable::new(x.as_slice(), max_chaos);
        let mut out = SymmetricTensor::zeros(self.dim, self.free_slots);
        for f in self.terms.values() {
            for (alpha, v) in f.entries() {
                for_each_submultiset(alpha.as_slice(), self.free_slots, |free, chaos| {
                    let chaos = MultiIndex::new(chaos.to_vec());
                    let add = perm_count(&chaos) as f64 * v * wick_monomial(&chaos, &table);
                    let current = out.get(free);
                    out.set(free, current + add).expect("index in range");
                });
            }
        }
        Ok(out)
    }

    /// `E[(U, V)_{H^{⊗k}}] = Σ_n n! (u_n, v_n)`.
    pub fn expected_pairing(&self, other: &Self) -> Result<f64> {
        if self.dim != other.dim || self.free_slots != other.free_slots {
            return Err(ChaosError::ShapeMismatch {
                left_dim: self.dim,
                left_order: self.free_slots,
                right_dim: other.dim,
                right_order: other.free_slots,
            });
        }
        let mut total = 0.0;
        for (n, f) in &self.terms {
            if let Some(g) = other.terms.get(n) {
                total += factorial(*n) as f64 * f.inner_product(g)?;
            }
        }
        Ok(total)
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.to_block().max_abs_diff(&other.to_block())
    }

    pub fn to_block(&self) -> BlockChaos {
        BlockChaos {
            dim: self.dim,
            free_slots: self.free_slots,
            terms: self
                .terms
                .iter()
                .map(|(&n, f)| (n, DenseTensor::from_symmetric(f)))
                .collect(),
        }
    }
}

/// Chaos expansion with free slots whose dense kernels, laid out as
/// `[chaos slots | free slots]`, are symmetric within each block but not
/// necessarily across them. Products of graded elements land here before
/// any cross-block symmetry is known.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockChaos {
    dim: usize,
    free_slots: usize,
    terms: BTreeMap<usize, DenseTensor>,
}

impl BlockChaos {
    pub fn zero(dim: usize, free_slots: usize) -> Self {
        Self {
            dim,
            free_slots,
            terms: BTreeMap::new(),
        }
    }

    pub fn free_slots(&self) -> usize {
        self.free_slots
    }

    pub fn term(&self, n: usize) -> Option<&DenseTensor> {
        self.terms.get(&n)
    }

    fn axpy_term(&mut self, n: usize, a: f64, kernel: &DenseTensor) {
        let (dim, k) = (self.dim, self.free_slots);
        self.terms
            .entry(n)
            .or_insert_with(|| DenseTensor::zeros(dim, n + k))
            .axpy(a, kernel);
    }

    pub fn axpy(&mut self, a: f64, other: &Self) -> Result<()> {
        self.check_shape(other)?;
        for (&n, t) in &other.terms {
            self.axpy_term(n, a, t);
        }
        Ok(())
    }

    fn check_shape(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim || self.free_slots != other.free_slots {
            return Err(ChaosError::ShapeMismatch {
                left_dim: self.dim,
                left_order: self.free_slots,
                right_dim: other.dim,
                right_order: other.free_slots,
            });
        }
        Ok(())
    }

    /// Largest kernel-entry difference over all chaos orders.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.check_shape(other)?;
        let mut diff: f64 = 0.0;
        for n in self.terms.keys().chain(other.terms.keys()) {
            diff = diff.max(match (self.terms.get(n), other.terms.get(n)) {
                (Some(a), Some(b)) => a.max_abs_diff(b),
                (Some(a), None) | (None, Some(a)) => a.max_abs(),
                (None, None) => 0.0,
            });
        }
        Ok(diff)
    }

    pub fn max_abs(&self) -> f64 {
        self.terms.values().fold(0.0, |m, t| m.max(t.max_abs()))
    }
}

/// `U ⊗̂ V` for graded elements: the product formula on the chaos slots,
/// the tensor product on the free slots, then symmetrization over the
/// combined free slots.
pub fn graded_product(u: &GradedChaos, v: &GradedChaos) -> Result<BlockChaos> {
    if u.dim != v.dim {
        return Err(ChaosError::DimMismatch(u.dim, v.dim));
    }
    let (ku, kv) = (u.free_slots, v.free_slots);
    let mut out = BlockChaos::zero(u.dim, ku + kv);
    for (&nu, f) in &u.terms {
        let df = DenseTensor::from_symmetric(f);
        for (&nv, g) in &v.terms {
            let dg = DenseTensor::from_symmetric(g);
            for i in 0..=nu.min(nv) {
                // f is symmetric, so its trailing i axes can serve as the
                // contracted chaos slots; what remains of each factor is
                // [chaos | free]
                let t = df.contract_trailing(&dg, i);
                let (cu, cv) = (nu - i, nv - i);
                let perm: Vec<usize> = (0..cu)
                    .chain(cu + ku..cu + ku + cv)
                    .chain(cu..cu + ku)
                    .chain(cu + ku + cv..cu + ku + cv + kv)
                    .collect();
                let kernel = t.permute_axes(&perm).symmetrize_blocks(&[cu + cv, ku + kv]);
                out.axpy_term(cu + cv, product_coefficient(nu, nv, i) as f64, &kernel);
            }
        }
    }
    Ok(out)
}

/// Right-hand side of the Leibniz rule `∇^n(FG) = Σ_i C(n,i) ∇^i F ⊗̂ ∇^{n-i} G`.
pub fn leibniz_rhs(f: &ChaosExpansion, g: &ChaosExpansion, n: usize) -> Result<BlockChaos> {
    let gf = GradedChaos::from_chaos(f);
    let gg = GradedChaos::from_chaos(g);
    let mut out = BlockChaos::zero(f.dim(), n);
    for i in 0..=n {
        let term = graded_product(&gf.gradient_n(i), &gg.gradient_n(n - i))?;
        out.axpy(binomial(n, i) as f64, &term)?;
    }
    Ok(out)
}

/// Left-hand side `∇^n(FG)`, product first.
pub fn leibniz_lhs(f: &ChaosExpansion, g: &ChaosExpansion, n: usize) -> Result<BlockChaos> {
    let fg = f.product(g)?;
    Ok(GradedChaos::from_chaos(&fg).gradient_n(n).to_block())
}
