//! Independent polynomial oracle: probabilists' Hermite polynomials, the
//! change of basis between Wick (chaos) form and raw monomials, naive
//! polynomial multiplication and exact Gaussian moments.
//!
//! Nothing here uses the product formula, so it serves as ground truth for
//! [`crate::chaos`].

use std::collections::BTreeMap;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::chaos::ChaosExpansion;
use crate::combinatorics::gaussian_moment_1d;
use crate::error::{ChaosError, Result};
use crate::symtensor::{perm_count, MultiIndex, SymmetricTensor};

/// Largest per-variable degree handled by the basis change. Keeps factorials
/// and double factorials exact in `f64`.
pub const MAX_DEGREE: usize = 12;

/// `He_n(x)`: `He_0 = 1`, `He_1 = x`, `He_{n+1} = x He_n - n He_{n-1}`.
pub fn hermite_eval(n: usize, x: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, x);
    if n == 0 {
        return prev;
    }
    for k in 1..n {
        let next = x * cur - k as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Monomial coefficients of `He_n`, lowest degree first.
pub fn hermite_coeffs(n: usize) -> Vec<f64> {
    assert!(n <= MAX_DEGREE, "Hermite degree {n} exceeds {MAX_DEGREE}");
    hermite_tables().0[n].clone()
}

/// Hermite coefficients of `x^n`: `x^n = Σ_j c_j He_j(x)`, lowest first.
pub fn monomial_in_hermite(n: usize) -> Vec<f64> {
    assert!(n <= MAX_DEGREE, "degree {n} exceeds {MAX_DEGREE}");
    hermite_tables().1[n].clone()
}

type Tables = (Vec<Vec<f64>>, Vec<Vec<f64>>);

fn hermite_tables() -> &'static Tables {
    static TABLES: OnceLock<Tables> = OnceLock::new();
    TABLES.get_or_init(|| {
        let mut he: Vec<Vec<f64>> = vec![vec![1.0], vec![0.0, 1.0]];
        for n in 1..MAX_DEGREE {
            let mut next = vec![0.0; n + 2];
            for (j, c) in he[n].iter().enumerate() {
                next[j + 1] += c;
            }
            for (j, c) in he[n - 1].iter().enumerate() {
                next[j] -= n as f64 * c;
            }
            he.push(next);
        }
        // He_n is monic, so x^n = He_n - Σ_{j<n} [x^j]He_n · x^j, with each
        // lower power already expressed in the Hermite basis.
        let mut inv: Vec<Vec<f64>> = Vec::with_capacity(MAX_DEGREE + 1);
        for n in 0..=MAX_DEGREE {
            let mut row = vec![0.0; n + 1];
            row[n] = 1.0;
            for j in 0..n {
                let c = he[n][j];
                if c != 0.0 {
                    for (k, v) in inv[j].iter().enumerate() {
                        row[k] -= c * v;
                    }
                }
            }
            inv.push(row);
        }
        (he, inv)
    })
}

/// `He_d(x_k)` for all coordinates `k` and degrees `d ≤ max_degree`.
#[derive(Clone, Debug)]
pub struct HermiteTable {
    stride: usize,
    values: Vec<f64>,
}

impl HermiteTable {
    pub fn new(x: &[f64], max_degree: usize) -> Self {
        let stride = max_degree + 1;
        let mut values = Vec::with_capacity(x.len() * stride);
        for &xk in x {
            let (mut prev, mut cur) = (1.0, xk);
            values.push(1.0);
            for d in 1..=max_degree {
                values.push(cur);
                let next = xk * cur - d as f64 * prev;
                prev = cur;
                cur = next;
            }
        }
        Self { stride, values }
    }

    pub fn get(&self, k: usize, degree: usize) -> f64 {
        debug_assert!(degree < self.stride);
        self.values[k * self.stride + degree]
    }
}

/// Multivariate polynomial in raw monomials `Π_k x_k^{a_k}`.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct MonomialPoly {
    dim: usize,
    terms: BTreeMap<Vec<usize>, f64>,
}

impl MonomialPoly {
    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(dim: usize, c: f64) -> Self {
        let mut p = Self::zero(dim);
        p.add_term(vec![0; dim], c);
        p
    }

    /// The coordinate `x_k`.
    pub fn variable(dim: usize, k: usize) -> Self {
        let mut exps = vec![0; dim];
        exps[k] = 1;
        let mut p = Self::zero(dim);
        p.add_term(exps, 1.0);
        p
    }

    pub fn add_term(&mut self, exponents: Vec<usize>, coefficient: f64) {
        assert_eq!(exponents.len(), self.dim);
        *self.terms.entry(exponents).or_insert(0.0) += coefficient;
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coefficient(&self, exponents: &[usize]) -> f64 {
        self.terms.get(exponents).copied().unwrap_or(0.0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[usize], f64)> + '_ {
        self.terms.iter().map(|(e, &c)| (e.as_slice(), c))
    }

    pub fn evaluate(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(exps, c)| {
                c * exps
                    .iter()
                    .zip(x)
                    .map(|(&a, &xk)| xk.powi(a as i32))
                    .product::<f64>()
            })
            .sum()
    }

    /// `E[P(ξ)]` for i.i.d. standard normal coordinates.
    pub fn expectation(&self) -> f64 {
        self.terms.iter().map(|(e, c)| c * gaussian_moment(e)).sum()
    }

    /// Largest coefficient difference (absent terms count as zero).
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut diff: f64 = 0.0;
        for (e, &c) in &self.terms {
            diff = diff.max((c - other.coefficient(e)).abs());
        }
        for (e, &c) in &other.terms {
            if !self.terms.contains_key(e) {
                diff = diff.max(c.abs());
            }
        }
        diff
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let file: PolyFile = serde_json::from_str(s)?;
        let mut p = Self::zero(file.dim);
        for t in file.terms {
            if t.exponents.len() != file.dim {
                return Err(ChaosError::InvalidIndex {
                    index: t.exponents,
                    reason: format!("exponent vector length differs from dim {}", file.dim),
                });
            }
            if !t.value.is_finite() {
                return Err(ChaosError::NonFinite(t.value));
            }
            p.add_term(t.exponents, t.value);
        }
        Ok(p)
    }

    pub fn to_json_string(&self) -> String {
        let file = PolyFile {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .map(|(e, &value)| PolyTermFile {
                    exponents: e.clone(),
                    value,
                })
                .collect(),
        };
        serde_json::to_string(&file).expect("polynomial serialization cannot fail")
    }
}

#[derive(Serialize, Deserialize)]
struct PolyFile {
    dim: usize,
    terms: Vec<PolyTermFile>,
}

#[derive(Serialize, Deserialize)]
struct PolyTermFile {
    exponents: Vec<usize>,
    value: f64,
}

/// Naive convolution of exponent vectors.
pub fn poly_mul(p: &MonomialPoly, q: &MonomialPoly) -> Result<MonomialPoly> {
    if p.dim != q.dim {
        return Err(ChaosError::DimMismatch(p.dim, q.dim));
    }
    let mut out = MonomialPoly::zero(p.dim);
    for (a, &ca) in &p.terms {
        for (b, &cb) in &q.terms {
            let exps = a.iter().zip(b).map(|(x, y)| x + y).collect();
            out.add_term(exps, ca * cb);
        }
    }
    Ok(out)
}

/// `E[Π_k ξ_k^{a_k}] = Π_k (a_k - 1)!!` (zero if any `a_k` is odd).
pub fn gaussian_moment(exponents: &[usize]) -> f64 {
    exponents
        .iter()
        .map(|&a| gaussian_moment_1d(a) as f64)
        .product()
}

/// Expands each per-variable factor through `basis(degree)` and multiplies
/// out, calling `visit(exponents, weight)` for every resulting term.
fn expand_product(
    degrees: &[usize],
    basis: fn(usize) -> Vec<f64>,
    mut visit: impl FnMut(&[usize], f64),
) {
    let factors: Vec<Vec<f64>> = degrees.iter().map(|&d| basis(d)).collect();
    let mut exps = vec![0; degrees.len()];
    fn recurse(
        k: usize,
        weight: f64,
        factors: &[Vec<f64>],
        exps: &mut [usize],
        visit: &mut dyn FnMut(&[usize], f64),
    ) {
        if k == factors.len() {
            visit(exps, weight);
            return;
        }
        for (j, &c) in factors[k].iter().enumerate() {
            if c != 0.0 {
                exps[k] = j;
                recurse(k + 1, weight * c, factors, exps, visit);
            }
        }
    }
    recurse(0, 1.0, &factors, &mut exps, &mut visit);
}

/// Wick form to monomial form: each `Π_k He_{α_k}(x_k)` expanded via
/// [`hermite_coeffs`].
pub fn chaos_to_monomial(f: &ChaosExpansion) -> MonomialPoly {
    let dim = f.dim();
    let mut out = MonomialPoly::zero(dim);
    for (_, kernel) in f.terms() {
        for (alpha, v) in kernel.entries() {
            let scale = perm_count(alpha) as f64 * v;
            expand_product(&alpha.counts(dim), hermite_coeffs, |exps, w| {
                out.add_term(exps.to_vec(), scale * w);
            });
        }
    }
    out.terms.retain(|_, c| *c != 0.0);
    out
}

/// Monomial form to Wick form: each `x_k^{a_k}` rewritten via
/// [`monomial_in_hermite`], then every Wick monomial `Π He_{b_k}` filed as a
/// symmetric kernel entry at the multi-index with multiplicities `b`.
pub fn monomial_to_chaos(p: &MonomialPoly) -> ChaosExpansion {
    let dim = p.dim;
    let mut kernels: BTreeMap<usize, SymmetricTensor> = BTreeMap::new();
    for (exps, &c) in &p.terms {
        expand_product(exps, monomial_in_hermite, |b, w| {
            let order: usize = b.iter().sum();
            let alpha = MultiIndex::new(
                b.iter()
                    .enumerate()
                    .flat_map(|(k, &m)| std::iter::repeat_n(k, m))
                    .collect(),
            );
            let value = c * w / perm_count(&alpha) as f64;
            let kernel = kernels
                .entry(order)
                .or_insert_with(|| SymmetricTensor::zeros(dim, order));
            let current = kernel.get(alpha.as_slice());
            kernel
                .set(alpha.as_slice(), current + value)
                .expect("index built in range");
        });
    }
    ChaosExpansion::from_terms(dim, kernels.into_values()).expect("shared dim")
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn hermite_eval_examples() {
        assert_eq!(hermite_eval(0, 3.7), 1.0);
        assert_eq!(hermite_eval(2, 2.0), 3.0);
        assert_eq!(hermite_eval(3, 1.0), -2.0);
    }

    #[test]
    fn hermite_coeffs_examples() {
        assert_eq!(hermite_coeffs(1), vec![0.0, 1.0]);
        assert_eq!(hermite_coeffs(2), vec![-1.0, 0.0, 1.0]);
        assert_eq!(hermite_coeffs(4), vec![3.0, 0.0, -6.0, 0.0, 1.0]);
        // He2^2 = He4 + 4 He2 + 2
        let he2 = hermite_coeffs(2);
        let mut sq = [0.0; 5];
        for (i, a) in he2.iter().enumerate() {
            for (j, b) in he2.iter().enumerate() {
                sq[i + j] += a * b;
            }
        }
        let he4 = hermite_coeffs(4);
        for d in 0..5 {
            let rhs = he4[d] + 4.0 * he2.get(d).unwrap_or(&0.0) + if d == 0 { 2.0 } else { 0.0 };
            assert_eq!(sq[d], rhs);
        }
    }

    #[test]
    fn hermite_coeffs_agree_with_recurrence() {
        let points = [-2.9, -1.3, -0.4, 0.0, 0.35, 0.8, 1.25, 1.9, 2.6, 3.3];
        for n in 0..=MAX_DEGREE {
            let c = hermite_coeffs(n);
            for &x in &points {
                let horner = c.iter().rev().fold(0.0, |acc, v| acc * x + v);
                assert_relative_eq!(
                    horner,
                    hermite_eval(n, x),
                    epsilon = 1e-10,
                    max_relative = 1e-10
                );
            }
        }
    }

    #[test]
    fn monomial_inverse_examples() {
        assert_eq!(monomial_in_hermite(2), vec![1.0, 0.0, 1.0]);
        // x^4 = He4 + 6 He2 + 3
        assert_eq!(monomial_in_hermite(4), vec![3.0, 0.0, 6.0, 0.0, 1.0]);
    }

    #[test]
    fn chaos_to_monomial_examples() {
        let mut e11 = SymmetricTensor::zeros(2, 2);
        e11.set(&[0, 0], 1.0).unwrap();
        let p = chaos_to_monomial(&ChaosExpansion::from_kernel(e11));
        assert_eq!(p.coefficient(&[2, 0]), 1.0);
        assert_eq!(p.coefficient(&[0, 0]), -1.0);
        assert_eq!(p.terms().count(), 2);

        let c = chaos_to_monomial(&ChaosExpansion::constant(2, 4.5));
        assert_eq!(c, MonomialPoly::constant(2, 4.5));

        let mut s = SymmetricTensor::zeros(2, 2);
        s.set(&[0, 1], 0.5).unwrap();
        let p = chaos_to_monomial(&ChaosExpansion::from_kernel(s));
        assert_eq!(p.coefficient(&[1, 1]), 1.0);
        assert_eq!(p.terms().count(), 1);
    }

    #[test]
    fn monomial_to_chaos_examples() {
        let mut x1sq = MonomialPoly::zero(2);
        x1sq.add_term(vec![2, 0], 1.0);
        let f = monomial_to_chaos(&x1sq);
        assert_eq!(f.term(2).unwrap().get(&[0, 0]), 1.0);
        assert_eq!(f.expectation(), 1.0);

        let c = monomial_to_chaos(&MonomialPoly::constant(3, -2.0));
        assert_eq!(c, ChaosExpansion::constant(3, -2.0));

        let mut x1x2 = MonomialPoly::zero(2);
        x1x2.add_term(vec![1, 1], 1.0);
        let f = monomial_to_chaos(&x1x2);
        assert_eq!(f.term(2).unwrap().get(&[0, 1]), 0.5);
        assert_eq!(chaos_to_monomial(&f), x1x2);
    }

    #[test]
    fn poly_mul_examples() {
        let x = MonomialPoly::variable(1, 0);
        let mut x2 = MonomialPoly::zero(1);
        x2.add_term(vec![2], 1.0);
        assert_eq!(poly_mul(&x, &x).unwrap(), x2);

        let mut he2 = MonomialPoly::zero(1);
        he2.add_term(vec![2], 1.0);
        he2.add_term(vec![0], -1.0);
        let sq = poly_mul(&he2, &he2).unwrap();
        assert_eq!(sq.coefficient(&[4]), 1.0);
        assert_eq!(sq.coefficient(&[2]), -2.0);
        assert_eq!(sq.coefficient(&[0]), 1.0);

        assert_eq!(
            poly_mul(&he2, &MonomialPoly::constant(1, 1.0)).unwrap(),
            he2
        );
        assert!(poly_mul(&he2, &MonomialPoly::constant(2, 1.0)).is_err());
    }

    #[test]
    fn gaussian_moment_examples() {
        assert_eq!(gaussian_moment(&[2]), 1.0);
        assert_eq!(gaussian_moment(&[4]), 3.0);
        assert_eq!(gaussian_moment(&[1, 1]), 0.0);
        assert_eq!(gaussian_moment(&[2, 4, 0]), 3.0);
    }

    #[test]
    fn poly_json_round_trip() {
        let mut p = MonomialPoly::zero(2);
        p.add_term(vec![1, 3], -0.25);
        p.add_term(vec![0, 0], 2.0);
        assert_eq!(MonomialPoly::from_json_str(&p.to_json_string()).unwrap(), p);
        assert!(
            MonomialPoly::from_json_str(r#"{"dim":2,"terms":[{"exponents":[1],"value":1}]}"#)
                .is_err()
        );
    }
}
