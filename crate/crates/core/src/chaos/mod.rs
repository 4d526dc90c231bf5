//! Finite Wiener chaos expansions `Σ_n I_n(f_n)` and the operator calculus
//! on them.
//!
//! Coordinates: `ξ_k = δe_k` for the orthonormal basis `e_1..e_m`, so
//! `I_p(f)(ξ) = Σ_α perm_count(α) f[α] Π_k He_{α_k}(ξ_k)` with probabilists'
//! Hermite polynomials and `α_k` the multiplicity of `k` in `α`.

mod graded;
mod json;
mod stroock;

pub use graded::{graded_product, leibniz_lhs, leibniz_rhs, BlockChaos, GradedChaos};
pub use json::{ChaosFile, TermFile};
pub use stroock::{stroock_coefficients, stroock_reconstruct, ScaledTensor, StroockCoefficients};

use std::collections::BTreeMap;

use crate::combinatorics::{factorial, product_coefficient, runs, MAX_FACTORIAL};
use crate::error::{ChaosError, Result};
use crate::hermite::HermiteTable;
use crate::symtensor::{perm_count, DenseTensor, MultiIndex, SymmetricTensor};

/// Default cap on the combined order `p + q` of a product.
pub const DEFAULT_ORDER_CAP: usize = 12;

/// Standard Gaussian coordinates `ξ_k = δe_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct GaussianSample(Vec<f64>);

impl GaussianSample {
    pub fn new(coords: Vec<f64>) -> Self {
        Self(coords)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl From<Vec<f64>> for GaussianSample {
    fn from(coords: Vec<f64>) -> Self {
        Self(coords)
    }
}

/// `Σ_n I_n(f_n)` with finitely many nonzero kernels. Absent orders are zero.
#[derive(Clone, Debug, PartialEq)]
pub struct ChaosExpansion {
    dim: usize,
    terms: BTreeMap<usize, SymmetricTensor>,
}

impl ChaosExpansion {
    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(dim: usize, c: f64) -> Self {
        Self::from_kernel(SymmetricTensor::scalar(dim, c))
    }

    /// `I_p(f)` as a single-term expansion.
    pub fn from_kernel(f: SymmetricTensor) -> Self {
        let mut out = Self::zero(f.dim());
        out.insert(f);
        out
    }

    pub fn from_terms(
        dim: usize,
        kernels: impl IntoIterator<Item = SymmetricTensor>,
    ) -> Result<Self> {
        let mut out = Self::zero(dim);
        for f in kernels {
            out.add_kernel(1.0, &f)?;
        }
        Ok(out)
    }

    fn insert(&mut self, f: SymmetricTensor) {
        if f.is_zero() {
            self.terms.remove(&f.order());
        } else {
            self.terms.insert(f.order(), f);
        }
    }

    /// Adds `a · I_n(f)` where `n` is the order of `f`.
    pub fn add_kernel(&mut self, a: f64, f: &SymmetricTensor) -> Result<()> {
        if f.dim() != self.dim {
            return Err(ChaosError::DimMismatch(self.dim, f.dim()));
        }
        let n = f.order();
        let mut acc = self
            .terms
            .remove(&n)
            .unwrap_or_else(|| SymmetricTensor::zeros(self.dim, n));
        acc.axpy(a, f)?;
        self.insert(acc);
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Highest order with a nonzero kernel (0 for the zero expansion).
    pub fn max_order(&self) -> usize {
        self.terms.keys().next_back().copied().unwrap_or(0)
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

    /// `E[F]`, the order-0 kernel.
    pub fn expectation(&self) -> f64 {
        self.terms
            .get(&0)
            .map_or(0.0, SymmetricTensor::scalar_value)
    }

    pub fn scaled(&self, a: f64) -> Self {
        let mut out = Self::zero(self.dim);
        for f in self.terms.values() {
            out.insert(f.scaled(a));
        }
        out
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let mut out = self.clone();
        for f in other.terms.values() {
            out.add_kernel(1.0, f)?;
        }
        Ok(out)
    }

    /// Largest kernel-entry difference over all orders.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        if self.dim != other.dim {
            return Err(ChaosError::DimMismatch(self.dim, other.dim));
        }
        let mut diff: f64 = 0.0;
        for n in self.terms.keys().chain(other.terms.keys()) {
            let zero = SymmetricTensor::zeros(self.dim, *n);
            let a = self.terms.get(n).unwrap_or(&zero);
            let b = other.terms.get(n).unwrap_or(&zero);
            diff = diff.max(a.max_abs_diff(b)?);
        }
        Ok(diff)
    }

    /// Product with the default order cap.
    pub fn product(&self, other: &Self) -> Result<Self> {
        self.product_with_cap(other, DEFAULT_ORDER_CAP)
    }

    /// `F · G` via `I_p(f) I_q(g) = Σ_{i ≤ p∧q} p!q!/(i!(p-i)!(q-i)!) I_{p+q-2i}(f ⊗̂_i g)`,
    /// extended bilinearly over term pairs.
    pub fn product_with_cap(&self, other: &Self, cap: usize) -> Result<Self> {
        if self.dim != other.dim {
            return Err(ChaosError::DimMismatch(self.dim, other.dim));
        }
        if cap > MAX_FACTORIAL {
            return Err(ChaosError::OrderCap {
                order: cap,
                cap: MAX_FACTORIAL,
            });
        }
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.dim));
        }
        let combined = self.max_order() + other.max_order();
        if combined > cap {
            return Err(ChaosError::OrderCap {
                order: combined,
                cap,
            });
        }

        let dense_left: Vec<(usize, DenseTensor)> = self
            .terms
            .iter()
            .map(|(&p, f)| (p, DenseTensor::from_symmetric(f)))
            .collect();
        let dense_right: Vec<(usize, DenseTensor)> = other
            .terms
            .iter()
            .map(|(&q, g)| (q, DenseTensor::from_symmetric(g)))
            .collect();

        let mut acc: BTreeMap<usize, SymmetricTensor> = BTreeMap::new();
        for (p, f) in &dense_left {
            for (q, g) in &dense_right {
                for i in 0..=(*p).min(*q) {
                    let coefficient = product_coefficient(*p, *q, i) as f64;
                    let kernel = f.contract_trailing(g, i).symmetrize();
                    let order = p + q - 2 * i;
                    acc.entry(order)
                        .or_insert_with(|| SymmetricTensor::zeros(self.dim, order))
                        .axpy(coefficient, &kernel)?;
                }
            }
        }
        let mut out = Self::zero(self.dim);
        for f in acc.into_values() {
            out.insert(f);
        }
        Ok(out)
    }

    pub fn evaluate(&self, x: &GaussianSample) -> Result<f64> {
        if x.len() != self.dim {
            return Err(ChaosError::SampleLength {
                expected: self.dim,
                got: x.len(),
            });
        }
        let table = HermiteTable::new(x.as_slice(), self.max_order());
        Ok(self.evaluate_with(&table))
    }

    /// Evaluation against precomputed Hermite values; the table must cover
    /// `max_order()` and `dim()`.
    pub fn evaluate_with(&self, table: &HermiteTable) -> f64 {
        self.terms
            .values()
            .map(|f| {
                f.entries()
                    .map(|(alpha, v)| perm_count(alpha) as f64 * v * wick_monomial(alpha, table))
                    .sum::<f64>()
            })
            .sum()
    }

    /// Ornstein–Uhlenbeck operator `L = δ∘∇`: scales the order-`n` kernel by `n`.
    pub fn ou_apply(&self) -> Self {
        let mut out = Self::zero(self.dim);
        for (&n, f) in &self.terms {
            out.insert(f.scaled(n as f64));
        }
        out
    }

    /// `‖(I+L)^{k/2} F‖_{L²}` = `sqrt(Σ_n (1+n)^k n! |f_n|²)`.
    pub fn sobolev_norm2(&self, k: i32) -> f64 {
        self.terms
            .iter()
            .map(|(&n, f)| {
                let weight = (1.0 + n as f64).powi(k) * factorial(n) as f64;
                weight * f.inner_product(f).expect("same shape")
            })
            .sum::<f64>()
            .sqrt()
    }

    /// `Σ_n (f_n, h^{⊗n})`, i.e. `E[F ρ(δh)] = E[F(· + h)]`.
    pub fn cameron_martin_pairing(&self, h: &SymmetricTensor) -> Result<f64> {
        if h.order() != 1 {
            return Err(ChaosError::ShapeMismatch {
                left_dim: self.dim,
                left_order: 1,
                right_dim: h.dim(),
                right_order: h.order(),
            });
        }
        if h.dim() != self.dim {
            return Err(ChaosError::DimMismatch(self.dim, h.dim()));
        }
        self.terms
            .iter()
            .map(|(&n, f)| f.inner_product(&SymmetricTensor::tensor_power(h, n)))
            .sum()
    }
}

/// Truncated Wick exponential `ρ(δh) = Σ_{n ≤ K} I_n(h^{⊗n}) / n!`.
pub fn wick_exponential(h: &SymmetricTensor, truncation: usize) -> Result<ChaosExpansion> {
    if h.order() != 1 {
        return Err(ChaosError::ShapeMismatch {
            left_dim: h.dim(),
            left_order: 1,
            right_dim: h.dim(),
            right_order: h.order(),
        });
    }
    if truncation > MAX_FACTORIAL {
        return Err(ChaosError::OrderCap {
            order: truncation,
            cap: MAX_FACTORIAL,
        });
    }
    let mut out = ChaosExpansion::zero(h.dim());
    for n in 0..=truncation {
        let power = SymmetricTensor::tensor_power(h, n);
        out.insert(power.scaled(1.0 / factorial(n) as f64));
    }
    Ok(out)
}

/// `Π_k He_{mult_k}(ξ_k)` for a sorted multi-index.
pub(crate) fn wick_monomial(alpha: &MultiIndex, table: &HermiteTable) -> f64 {
    runs(alpha.as_slice())
        .map(|(k, mult)| table.get(k, mult))
        .product()
}
