//! Discretized Wiener space on a uniform grid of `[0, 1]`.
//!
//! The Cameron–Martin basis is `e_j = dt^{-1/2} 1_{((j-1)dt, j dt]}` (as
//! derivatives), so a path's Gaussian coordinates are `ξ_j = ΔW_j / √dt`. A
//! step kernel with block values `f[j_1..j_p]` has tensor coordinates
//! `f[j] dt^{p/2}` in that basis.

use rand_distr::{Distribution, StandardNormal};

use crate::chaos::{ChaosExpansion, GaussianSample};
use crate::combinatorics::factorial;
use crate::error::{ChaosError, Result};
use crate::hermite::HermiteTable;
use crate::parallel::{map_indices, SampleStats};
use crate::report::{digest, CaseRecord};
use crate::rng::stream_rng;
use crate::symtensor::SymmetricTensor;

/// Statistical checks pass within this many standard errors.
pub const SIGMA_THRESHOLD: f64 = 4.0;

/// Pathwise product residual bound.
pub const PATHWISE_TOLERANCE: f64 = 1e-8;

/// Highest order accepted by [`iterated_ito_sum`].
pub const MAX_ITERATED_ORDER: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GridBasis {
    n_steps: usize,
}

impl GridBasis {
    pub fn new(n_steps: usize) -> Result<Self> {
        if n_steps == 0 {
            return Err(ChaosError::InvalidConfig(
                "grid needs at least one step".into(),
            ));
        }
        Ok(Self { n_steps })
    }

    pub fn n_steps(&self) -> usize {
        self.n_steps
    }

    pub fn dt(&self) -> f64 {
        1.0 / self.n_steps as f64
    }

    /// Midpoint of block `j` (0-based).
    pub fn midpoint(&self, j: usize) -> f64 {
        (j as f64 + 0.5) * self.dt()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BrownianPath {
    grid: GridBasis,
    increments: Vec<f64>,
}

impl BrownianPath {
    pub fn from_increments(grid: GridBasis, increments: Vec<f64>) -> Result<Self> {
        if increments.len() != grid.n_steps() {
            return Err(ChaosError::SampleLength {
                expected: grid.n_steps(),
                got: increments.len(),
            });
        }
        Ok(Self { grid, increments })
    }

    pub fn grid(&self) -> GridBasis {
        self.grid
    }

    pub fn increments(&self) -> &[f64] {
        &self.increments
    }

    pub fn terminal(&self) -> f64 {
        self.increments.iter().sum()
    }

    /// `ξ_j = ΔW_j / √dt`.
    pub fn coords(&self) -> GaussianSample {
        let scale = self.grid.dt().sqrt();
        GaussianSample::new(self.increments.iter().map(|dw| dw / scale).collect())
    }
}

/// Path number `index` of the stream keyed by `(seed, domain)`.
pub fn sample_path(grid: GridBasis, seed: u64, domain: u64, index: u64) -> BrownianPath {
    let mut rng = stream_rng(seed, domain, index);
    let sd = grid.dt().sqrt();
    let increments = (0..grid.n_steps())
        .map(|_| sd * <StandardNormal as Distribution<f64>>::sample(&StandardNormal, &mut rng))
        .collect();
    BrownianPath { grid, increments }
}

/// Symmetric step kernel: its values on grid blocks, stored as a symmetric
/// tensor of dim `N` holding function values (not basis coordinates).
#[derive(Clone, Debug, PartialEq)]
pub struct StepKernel {
    grid: GridBasis,
    values: SymmetricTensor,
}

impl StepKernel {
    pub fn new(grid: GridBasis, values: SymmetricTensor) -> Result<Self> {
        if values.dim() != grid.n_steps() {
            return Err(ChaosError::DimMismatch(grid.n_steps(), values.dim()));
        }
        Ok(Self { grid, values })
    }

    /// Samples `f` at block midpoints. `f` must be symmetric in its arguments.
    pub fn from_fn(grid: GridBasis, order: usize, f: impl Fn(&[f64]) -> f64) -> Self {
        let mut values = SymmetricTensor::zeros(grid.n_steps(), order);
        let mut t = vec![0.0; order];
        crate::combinatorics::for_each_sorted_index(grid.n_steps(), order, |idx| {
            for (slot, &j) in t.iter_mut().zip(idx) {
                *slot = grid.midpoint(j);
            }
            values.set(idx, f(&t)).expect("finite kernel value");
        });
        Self { grid, values }
    }

    /// Block values from the tensor JSON format; the tensor's dim is `N`.
    pub fn from_tensor_json(s: &str) -> Result<Self> {
        let values = SymmetricTensor::from_json_str(s)?;
        Self::new(GridBasis::new(values.dim())?, values)
    }

    pub fn grid(&self) -> GridBasis {
        self.grid
    }

    pub fn order(&self) -> usize {
        self.values.order()
    }

    pub fn values(&self) -> &SymmetricTensor {
        &self.values
    }

    /// The same kernel with every diagonal block (repeated index) zeroed.
    pub fn off_diagonal(&self) -> Self {
        let entries = self
            .values
            .entries()
            .filter(|(alpha, _)| alpha.as_slice().windows(2).all(|w| w[0] < w[1]))
            .map(|(alpha, v)| (alpha.clone(), v));
        let values = SymmetricTensor::from_entries(self.values.dim(), self.order(), entries)
            .expect("subset of a valid tensor");
        Self {
            grid: self.grid,
            values,
        }
    }

    /// `⟨f, g⟩` in `L²([0,1]^p)`.
    pub fn l2_inner(&self, other: &Self) -> Result<f64> {
        let dt = self.grid.dt();
        Ok(self.values.inner_product(&other.values)? * dt.powi(self.order() as i32))
    }
}

/// Coordinates of a step kernel in the grid basis: `f[blocks] dt^{p/2}`.
pub fn kernel_to_tensor(f: &StepKernel, basis: GridBasis) -> Result<SymmetricTensor> {
    if f.grid != basis {
        return Err(ChaosError::DimMismatch(basis.n_steps(), f.grid.n_steps()));
    }
    Ok(f.values.scaled(basis.dt().sqrt().powi(f.order() as i32)))
}

/// `I_p(f)` as a chaos expansion in the grid coordinates.
pub fn kernel_chaos(f: &StepKernel) -> ChaosExpansion {
    ChaosExpansion::from_kernel(kernel_to_tensor(f, f.grid).expect("own grid"))
}

/// `p! Σ_{j_1 < … < j_p} f[j_1..j_p] ΔW_{j_1} ⋯ ΔW_{j_p}`, the strict-order
/// discretization of the iterated integral. Diagonal blocks do not enter.
pub fn iterated_ito_sum(f: &StepKernel, path: &BrownianPath) -> Result<f64> {
    let p = f.order();
    if p > MAX_ITERATED_ORDER {
        return Err(ChaosError::IteratedOrder(p));
    }
    if f.grid != path.grid {
        return Err(ChaosError::DimMismatch(
            f.grid.n_steps(),
            path.grid.n_steps(),
        ));
    }
    let dw = path.increments();
    let sum: f64 = f
        .values
        .entries()
        .filter(|(alpha, _)| alpha.as_slice().windows(2).all(|w| w[0] < w[1]))
        .map(|(alpha, v)| v * alpha.as_slice().iter().map(|&j| dw[j]).product::<f64>())
        .sum();
    Ok(factorial(p) as f64 * sum)
}

fn chaos_digest(label: &str, kernels: &[&SymmetricTensor], seed: u64, paths: u64) -> String {
    let mut parts = vec![label.to_string(), seed.to_string(), paths.to_string()];
    parts.extend(kernels.iter().map(|k| k.to_json_string()));
    digest(&parts)
}

/// Sample mean of `I_p(f) I_q(g)` against `δ_{pq} p! ⟨f, g⟩`.
pub fn mc_isometry_test(
    name: &str,
    f: &StepKernel,
    g: &StepKernel,
    paths: u64,
    seed: u64,
    domain: u64,
    parallel: bool,
) -> Result<CaseRecord> {
    if paths == 0 {
        return Err(ChaosError::ZeroPaths);
    }
    if f.grid != g.grid {
        return Err(ChaosError::DimMismatch(f.grid.n_steps(), g.grid.n_steps()));
    }
    let (fc, gc) = (kernel_chaos(f), kernel_chaos(g));
    let max_order = f.order().max(g.order());
    let grid = f.grid;
    let products = map_indices(paths, parallel, |i| {
        let x = sample_path(grid, seed, domain, i).coords();
        let table = HermiteTable::new(x.as_slice(), max_order);
        fc.evaluate_with(&table) * gc.evaluate_with(&table)
    });
    let stats = SampleStats::from_slice(&products);
    let expected = if f.order() == g.order() {
        factorial(f.order()) as f64 * f.l2_inner(g)?
    } else {
        0.0
    };
    Ok(CaseRecord::new(
        name,
        chaos_digest(name, &[f.values(), g.values()], seed, paths),
        (stats.mean - expected).abs(),
        SIGMA_THRESHOLD * stats.std_error,
    ))
}

/// Largest per-path `|I_p(f) I_q(g) − (I_p(f) · I_q(g))_{product formula}|`.
pub fn mc_product_test(
    name: &str,
    f: &StepKernel,
    g: &StepKernel,
    paths: u64,
    seed: u64,
    domain: u64,
    parallel: bool,
) -> Result<CaseRecord> {
    if paths == 0 {
        return Err(ChaosError::ZeroPaths);
    }
    if f.order() > 2 || g.order() > 2 {
        return Err(ChaosError::InvalidConfig(
            "pathwise product check takes kernels of order at most 2".into(),
        ));
    }
    if f.grid != g.grid {
        return Err(ChaosError::DimMismatch(f.grid.n_steps(), g.grid.n_steps()));
    }
    let (fc, gc) = (kernel_chaos(f), kernel_chaos(g));
    let product = fc.product(&gc)?;
    let max_order = f.order() + g.order();
    let grid = f.grid;
    let residuals = map_indices(paths, parallel, |i| {
        let x = sample_path(grid, seed, domain, i).coords();
        let table = HermiteTable::new(x.as_slice(), max_order);
        (fc.evaluate_with(&table) * gc.evaluate_with(&table) - product.evaluate_with(&table)).abs()
    });
    let worst = residuals.iter().copied().fold(0.0, f64::max);
    Ok(CaseRecord::new(
        name,
        chaos_digest(name, &[f.values(), g.values()], seed, paths),
        worst,
        PATHWISE_TOLERANCE,
    ))
}

/// Gap between the iterated sum and the chaos value on one grid level.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GapLevel {
    pub n_steps: usize,
    /// Sample statistics of the squared gap.
    pub gap2: SampleStats,
}

impl GapLevel {
    pub fn dt(&self) -> f64 {
        1.0 / self.n_steps as f64
    }
}

/// Squared gaps `(iterated_ito_sum − I_p(f)(ξ))²` over `paths` paths.
pub fn gap_level(
    f: &StepKernel,
    paths: u64,
    seed: u64,
    domain: u64,
    parallel: bool,
) -> Result<GapLevel> {
    if paths == 0 {
        return Err(ChaosError::ZeroPaths);
    }
    if f.order() > MAX_ITERATED_ORDER {
        return Err(ChaosError::IteratedOrder(f.order()));
    }
    let chaos = kernel_chaos(f);
    let grid = f.grid;
    let gaps = map_indices(paths, parallel, |i| {
        let path = sample_path(grid, seed, domain, i);
        let iterated = iterated_ito_sum(f, &path).expect("order checked");
        let x = path.coords();
        let table = HermiteTable::new(x.as_slice(), f.order());
        (iterated - chaos.evaluate_with(&table)).powi(2)
    });
    Ok(GapLevel {
        n_steps: grid.n_steps(),
        gap2: SampleStats::from_slice(&gaps),
    })
}

/// Convergence of iterated sums to the chaos form under grid refinement.
#[derive(Clone, Debug, PartialEq)]
pub struct ItoConvergence {
    pub levels: Vec<GapLevel>,
    /// Least-squares slope of `log E[gap²]` against `log dt`.
    pub variance_slope: f64,
}

impl ItoConvergence {
    /// Slope of the `L²` norm of the gap, half the variance slope.
    pub fn norm_slope(&self) -> f64 {
        0.5 * self.variance_slope
    }
}

/// Runs [`gap_level`] on every grid size of `ladder` with a kernel sampled
/// from `sampler`, then fits the decay rate.
pub fn mc_ito_convergence_test(
    sampler: impl Fn(&[f64]) -> f64,
    order: usize,
    ladder: &[usize],
    paths: u64,
    seed: u64,
    domain: u64,
    parallel: bool,
) -> Result<ItoConvergence> {
    if ladder.len() < 2 {
        return Err(ChaosError::InvalidConfig(
            "need at least two grid sizes".into(),
        ));
    }
    let kernels = ladder
        .iter()
        .map(|&n| Ok(StepKernel::from_fn(GridBasis::new(n)?, order, &sampler)))
        .collect::<Result<Vec<_>>>()?;
    if kernels.iter().all(|f| f.values.is_zero()) {
        return Err(ChaosError::DegenerateKernel);
    }
    let levels = kernels
        .iter()
        .map(|f| gap_level(f, paths, seed, domain ^ f.grid.n_steps() as u64, parallel))
        .collect::<Result<Vec<_>>>()?;
    let points: Vec<(f64, f64)> = levels
        .iter()
        .map(|l| (l.dt().ln(), l.gap2.mean.ln()))
        .collect();
    Ok(ItoConvergence {
        levels,
        variance_slope: least_squares_slope(&points),
    })
}

fn least_squares_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}
