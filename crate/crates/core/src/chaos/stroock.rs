use std::collections::BTreeMap;

use crate::combinatorics::{factorial, MAX_FACTORIAL};
use crate::error::{ChaosError, Result};
use crate::symtensor::SymmetricTensor;

use super::ChaosExpansion;

/// A tensor `factor · kernel` with an exact integer factor.
///
/// `E[∇^n F] = n! f_n` is kept in this form: multiplying a float by `n!` and
/// dividing again does not always return the same float, while carrying the
/// factor separately makes reconstruction exact.
#[derive(Clone, Debug, PartialEq)]
pub struct ScaledTensor {
    pub factor: u64,
    pub kernel: SymmetricTensor,
}

impl ScaledTensor {
    pub fn materialize(&self) -> SymmetricTensor {
        self.kernel.scaled(self.factor as f64)
    }

    pub fn norm(&self) -> f64 {
        self.factor as f64 * self.kernel.norm()
    }
}

/// The Stroock coefficients `n ↦ E[∇^n F]`.
#[derive(Clone, Debug, PartialEq)]
pub struct StroockCoefficients {
    dim: usize,
    coeffs: BTreeMap<usize, ScaledTensor>,
}

impl StroockCoefficients {
    /// Coefficients given directly as tensors (factor 1). Each tensor's
    /// order is its `n`.
    pub fn from_tensors(
        dim: usize,
        tensors: impl IntoIterator<Item = SymmetricTensor>,
    ) -> Result<Self> {
        let mut coeffs = BTreeMap::new();
        for t in tensors {
            if t.dim() != dim {
                return Err(ChaosError::DimMismatch(dim, t.dim()));
            }
            if t.order() > MAX_FACTORIAL {
                return Err(ChaosError::OrderCap {
                    order: t.order(),
                    cap: MAX_FACTORIAL,
                });
            }
            if coeffs.contains_key(&t.order()) {
                return Err(ChaosError::InvalidConfig(format!(
                    "two coefficients of order {}",
                    t.order()
                )));
            }
            coeffs.insert(
                t.order(),
                ScaledTensor {
                    factor: 1,
                    kernel: t,
                },
            );
        }
        Ok(Self { dim, coeffs })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, n: usize) -> Option<&ScaledTensor> {
        self.coeffs.get(&n)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &ScaledTensor)> + '_ {
        self.coeffs.iter().map(|(&n, c)| (n, c))
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }
}

/// `E[∇^n F] = n! f_n` for every present order.
pub fn stroock_coefficients(f: &ChaosExpansion) -> StroockCoefficients {
    StroockCoefficients {
        dim: f.dim(),
        coeffs: f
            .terms()
            .map(|(n, kernel)| {
                (
                    n,
                    ScaledTensor {
                        factor: factorial(n),
                        kernel: kernel.clone(),
                    },
                )
            })
            .collect(),
    }
}

/// `F = E[F] + Σ_n I_n(E[∇^n F]) / n!`.
pub fn stroock_reconstruct(coeffs: &StroockCoefficients) -> Result<ChaosExpansion> {
    let mut out = ChaosExpansion::zero(coeffs.dim);
    for (&n, c) in &coeffs.coeffs {
        if c.kernel.order() != n || c.kernel.dim() != coeffs.dim {
            return Err(ChaosError::ShapeMismatch {
                left_dim: coeffs.dim,
                left_order: n,
                right_dim: c.kernel.dim(),
                right_order: c.kernel.order(),
            });
        }
        let n_factorial = factorial(n);
        let kernel = if c.factor == n_factorial {
            c.kernel.clone()
        } else {
            c.kernel.scaled(c.factor as f64 / n_factorial as f64)
        };
        out.add_kernel(1.0, &kernel)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chaos::GradedChaos;

    fn xi_squared() -> ChaosExpansion {
        let mut e11 = SymmetricTensor::zeros(2, 2);
        e11.set(&[0, 0], 1.0).unwrap();
        ChaosExpansion::from_terms(2, [e11, SymmetricTensor::scalar(2, 1.0)]).unwrap()
    }

    #[test]
    fn coefficients_of_xi_squared() {
        let f = xi_squared();
        let c = stroock_coefficients(&f);
        let mut two_e11 = SymmetricTensor::zeros(2, 2);
        two_e11.set(&[0, 0], 2.0).unwrap();
        assert_eq!(c.get(2).unwrap().materialize(), two_e11);
        assert_eq!(
            c.get(0).unwrap().materialize().scalar_value(),
            f.expectation()
        );
        // same as the order-0 part of ∇²F
        let grad = GradedChaos::from_chaos(&f).gradient_n(2).expectation();
        assert_eq!(grad, two_e11);
        assert_eq!(stroock_reconstruct(&c).unwrap(), f);
    }

    #[test]
    fn reconstruct_edge_cases() {
        let empty = StroockCoefficients::from_tensors(3, []).unwrap();
        assert!(stroock_reconstruct(&empty).unwrap().is_zero());

        let h = SymmetricTensor::vector(&[0.1, 0.2, -0.3]);
        let single = StroockCoefficients::from_tensors(3, [h.clone()]).unwrap();
        assert_eq!(
            stroock_reconstruct(&single).unwrap(),
            ChaosExpansion::from_kernel(h)
        );

        let mut two_e11 = SymmetricTensor::zeros(2, 2);
        two_e11.set(&[0, 0], 2.0).unwrap();
        let given =
            StroockCoefficients::from_tensors(2, [two_e11, SymmetricTensor::scalar(2, 1.0)])
                .unwrap();
        assert_eq!(stroock_reconstruct(&given).unwrap(), xi_squared());

        assert!(StroockCoefficients::from_tensors(2, [SymmetricTensor::basis(3, 0)]).is_err());
    }

    #[test]
    fn round_trip_is_bitwise_for_awkward_values() {
        // 0.1 * 6 / 6 != 0.1 in binary floating point
        let mut k = SymmetricTensor::zeros(1, 3);
        k.set(&[0, 0, 0], 0.1).unwrap();
        let f = ChaosExpansion::from_kernel(k);
        assert_eq!(stroock_reconstruct(&stroock_coefficients(&f)).unwrap(), f);
    }
}
