//! Named verification suites. Each suite turns one group of algebraic or
//! statistical properties into [`CaseRecord`]s; every random input is drawn
//! from a stream keyed by `(seed, suite, trial)`.

use std::time::Instant;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::chaos::{
    leibniz_lhs, leibniz_rhs, stroock_coefficients, stroock_reconstruct, wick_exponential,
    ChaosExpansion, GaussianSample, GradedChaos, DEFAULT_ORDER_CAP,
};
use crate::combinatorics::{factorial, product_coefficient};
use crate::error::{ChaosError, Result};
use crate::hermite::{chaos_to_monomial, hermite_eval, poly_mul};
use crate::montecarlo::{
    gap_level, iterated_ito_sum, kernel_chaos, mc_isometry_test, mc_ito_convergence_test,
    mc_product_test, sample_path, GridBasis, StepKernel, SIGMA_THRESHOLD,
};
use crate::parallel::{map_indices, SampleStats};
use crate::random::{
    random_expansion, random_symmetric, random_unit_vector, random_vector, standard_normals,
};
use crate::report::{digest, CaseRecord, VerificationReport};
use crate::rng::{domain, stream_rng, StreamRng};
use crate::symtensor::SymmetricTensor;

pub const SUITES: [&str; 7] = [
    "product",
    "leibniz",
    "stroock",
    "cameron-martin",
    "isometry-mc",
    "ito-convergence",
    "all",
];

/// Default tolerance for algebraic identities.
pub const ALGEBRAIC_TOL: f64 = 1e-9;
/// Isometry and Wick/Cameron–Martin pairings.
pub const PAIRING_TOL: f64 = 1e-10;
/// OU consistency, Stroock bound slack, iterated-sum exactness.
pub const TIGHT_TOL: f64 = 1e-12;
/// Pointwise product evaluation, relative to magnitude.
pub const POINTWISE_TOL: f64 = 1e-8;
/// Accepted window for the log-log slope of `E[gap²]` against `dt`.
pub const GAP_SLOPE_RANGE: (f64, f64) = (0.7, 1.3);
/// Grid ladder for the iterated-sum convergence check.
pub const ITO_LADDER: [usize; 6] = [8, 16, 32, 64, 128, 256];

/// Largest dense intermediate (`dim^order` entries) a config may request.
const DENSE_BUDGET: f64 = (1u64 << 22) as f64;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub suite: String,
    pub dim: usize,
    /// Largest combined order of any product formed.
    pub max_order: usize,
    pub trials: u64,
    pub paths: u64,
    pub grid: usize,
    pub seed: u64,
    /// Override for the algebraic tolerance.
    pub tol: Option<f64>,
    pub parallel: bool,
    pub timing: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            suite: "all".into(),
            dim: 3,
            max_order: 8,
            trials: 200,
            paths: 100_000,
            grid: 64,
            seed: 42,
            tol: None,
            parallel: false,
            timing: false,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if !SUITES.contains(&self.suite.as_str()) {
            return Err(ChaosError::UnknownSuite(self.suite.clone()));
        }
        for (name, value) in [
            ("dim", self.dim as u64),
            ("max-order", self.max_order as u64),
            ("trials", self.trials),
            ("paths", self.paths),
            ("grid", self.grid as u64),
        ] {
            if value == 0 {
                return Err(ChaosError::InvalidConfig(format!(
                    "{name} must be positive"
                )));
            }
        }
        if self.max_order > DEFAULT_ORDER_CAP {
            return Err(ChaosError::OrderCap {
                order: self.max_order,
                cap: DEFAULT_ORDER_CAP,
            });
        }
        if (self.dim as f64).powi(self.max_order as i32) > DENSE_BUDGET {
            return Err(ChaosError::InvalidConfig(format!(
                "dim {} with combined order {} exceeds the dense tensor budget",
                self.dim, self.max_order
            )));
        }
        if self.grid > 4096 {
            return Err(ChaosError::InvalidConfig(
                "grid is limited to 4096 steps".into(),
            ));
        }
        if let Some(tol) = self.tol {
            if !(tol.is_finite() && tol > 0.0) {
                return Err(ChaosError::InvalidConfig(format!(
                    "tolerance {tol} must be positive"
                )));
            }
        }
        Ok(())
    }

    pub fn algebraic_tol(&self) -> f64 {
        self.tol.unwrap_or(ALGEBRAIC_TOL)
    }

    fn half_order(&self) -> usize {
        self.max_order / 2
    }
}

/// Runs the configured suite. The report's aggregate pass is the
/// conjunction of its cases.
pub fn run_suite(config: &RunConfig) -> Result<VerificationReport> {
    config.validate()?;
    let start = Instant::now();
    let cases = match config.suite.as_str() {
        "all" => {
            let mut cases = Vec::new();
            for suite in &SUITES[..SUITES.len() - 1] {
                cases.extend(suite_cases(suite, config)?);
            }
            cases
        }
        suite => suite_cases(suite, config)?,
    };
    let mut report = VerificationReport::new(config.clone(), cases);
    if config.timing {
        report.runtime_ms = Some(start.elapsed().as_millis() as u64);
    }
    Ok(report)
}

fn suite_cases(suite: &str, config: &RunConfig) -> Result<Vec<CaseRecord>> {
    match suite {
        "product" => product_suite(config),
        "leibniz" => leibniz_suite(config),
        "stroock" => stroock_suite(config),
        "cameron-martin" => cameron_martin_suite(config),
        "isometry-mc" => isometry_suite(config),
        "ito-convergence" => ito_suite(config),
        other => Err(ChaosError::UnknownSuite(other.to_string())),
    }
}

/// Runs `body` once per trial on its own stream and flattens the cases.
fn per_trial<F>(config: &RunConfig, label: &str, body: F) -> Result<Vec<CaseRecord>>
where
    F: Fn(&mut StreamRng, u64) -> Result<Vec<CaseRecord>> + Sync + Send,
{
    let tag = domain(label);
    let seed = config.seed;
    let results = map_indices(config.trials, config.parallel, |t| {
        let mut rng = stream_rng(seed, tag, t);
        body(&mut rng, t)
    });
    let mut cases = Vec::new();
    for r in results {
        cases.extend(r?);
    }
    Ok(cases)
}

fn expansion_digest(items: &[&ChaosExpansion]) -> String {
    let parts: Vec<String> = items.iter().map(|f| f.to_json_string()).collect();
    digest(&parts)
}

fn relative(diff: f64, scale: f64) -> f64 {
    diff / scale.abs().max(1.0)
}

// ---------------------------------------------------------------- product

/// `I_1(e_1)² = I_2(e_1⊗e_1) + 1` and `He_2² = He_4 + 4He_2 + 2`.
pub fn product_fixture_cases() -> Result<Vec<CaseRecord>> {
    let e1 = SymmetricTensor::basis(1, 0);
    let xi = ChaosExpansion::from_kernel(e1.clone());
    let e11 = SymmetricTensor::tensor_power(&e1, 2);
    let expected = ChaosExpansion::from_terms(1, [e11.clone(), SymmetricTensor::scalar(1, 1.0)])?;
    let first = xi.product(&xi)?.max_abs_diff(&expected)?;

    let he2 = ChaosExpansion::from_kernel(e11.clone());
    let expected = ChaosExpansion::from_terms(
        1,
        [
            SymmetricTensor::tensor_power(&e1, 4),
            e11.scaled(4.0),
            SymmetricTensor::scalar(1, 2.0),
        ],
    )?;
    let second = he2.product(&he2)?.max_abs_diff(&expected)?;
    let rounding = 4.0 * f64::EPSILON;
    Ok(vec![
        CaseRecord::new(
            "product/fixture/xi-squared",
            digest(&["xi-squared"]),
            first,
            rounding,
        ),
        CaseRecord::new(
            "product/fixture/he2-squared",
            digest(&["he2-squared"]),
            second,
            rounding,
        ),
    ])
}

fn product_suite(config: &RunConfig) -> Result<Vec<CaseRecord>> {
    let tol = config.algebraic_tol();
    let half = config.half_order();
    let mut cases = product_fixture_cases()?;
    cases.extend(per_trial(config, "product", |rng, t| {
        let m = rng.random_range(1..=config.dim);
        let f = random_expansion(rng, m, half);
        let g = random_expansion(rng, m, half);
        let inputs = expansion_digest(&[&f, &g]);
        let fg = f.product_with_cap(&g, config.max_order)?;

        let oracle = poly_mul(&chaos_to_monomial(&f), &chaos_to_monomial(&g))?;
        let oracle_err = chaos_to_monomial(&fg).max_abs_diff(&oracle);

        let mut pointwise: f64 = 0.0;
        for _ in 0..100 {
            let x = GaussianSample::new(standard_normals(rng, m));
            let (a, b) = (f.evaluate(&x)?, g.evaluate(&x)?);
            pointwise = pointwise.max(relative((fg.evaluate(&x)? - a * b).abs(), a * b));
        }

        // E[I_p(f) I_q(g)] = δ_pq p! (f, g)
        let (p, q) = (rng.random_range(0..=half), rng.random_range(0..=half));
        let (kf, kg) = (random_symmetric(rng, m, p), random_symmetric(rng, m, q));
        let mean = ChaosExpansion::from_kernel(kf.clone())
            .product(&ChaosExpansion::from_kernel(kg.clone()))?
            .expectation();
        let expected = if p == q {
            factorial(p) as f64 * kf.inner_product(&kg)?
        } else {
            0.0
        };

        // E[I_p(f) I_q(g) φ] three ways: nested products, the monomial
        // oracle, and the adjoint-pairing chain
        //   Σ_i p!q!/(i!(p-i)!(q-i)!) (g ⊗̂_i f, E[∇^{p+q-2i} φ])
        let (p, q) = (
            rng.random_range(0..=half.min(2)),
            rng.random_range(0..=half.min(2)),
        );
        let (kf, kg) = (random_symmetric(rng, m, p), random_symmetric(rng, m, q));
        let phi = random_expansion(rng, m, config.max_order - p - q);
        let (ip, iq) = (
            ChaosExpansion::from_kernel(kf.clone()),
            ChaosExpansion::from_kernel(kg.clone()),
        );
        let nested = ip
            .product(&iq)?
            .product_with_cap(&phi, config.max_order)?
            .expectation();
        let monomial = poly_mul(
            &poly_mul(&chaos_to_monomial(&ip), &chaos_to_monomial(&iq))?,
            &chaos_to_monomial(&phi),
        )?
        .expectation();
        let stroock = stroock_coefficients(&phi);
        let mut chain = 0.0;
        for i in 0..=p.min(q) {
            if let Some(c) = stroock.get(p + q - 2 * i) {
                let sym = kg.contract(&kf, i)?.symmetrize();
                chain +=
                    product_coefficient(p, q, i) as f64 * sym.inner_product(&c.materialize())?;
            }
        }
        let adjoint = relative(
            (nested - monomial).abs().max((chain - monomial).abs()),
            monomial,
        );

        Ok(vec![
            CaseRecord::new(
                format!("product/oracle/{t}"),
                inputs.clone(),
                oracle_err,
                tol,
            ),
            CaseRecord::new(
                format!("product/pointwise/{t}"),
                inputs,
                pointwise,
                POINTWISE_TOL,
            ),
            CaseRecord::new(
                format!("product/isometry/{t}"),
                digest(&[kf.to_json_string(), kg.to_json_string()]),
                (mean - expected).abs(),
                PAIRING_TOL,
            ),
            CaseRecord::new(
                format!("product/adjoint/{t}"),
                expansion_digest(&[&ip, &iq, &phi]),
                adjoint,
                tol,
            ),
        ])
    })?);
    Ok(cases)
}

// ---------------------------------------------------------------- leibniz

fn random_graded<R: Rng + ?Sized>(
    rng: &mut R,
    dim: usize,
    free_slots: usize,
    top: usize,
) -> GradedChaos {
    let mut u = GradedChaos::constant(random_symmetric(rng, dim, free_slots));
    for n in 1..=top {
        // I_n of a random symmetric kernel of order n + k, differentiated k times
        let kernel = random_symmetric(rng, dim, n + free_slots);
        let lifted =
            GradedChaos::from_chaos(&ChaosExpansion::from_kernel(kernel)).gradient_n(free_slots);
        u = u.add(&lifted).expect("same shape");
    }
    u
}

fn leibniz_suite(config: &RunConfig) -> Result<Vec<CaseRecord>> {
    let tol = config.algebraic_tol();
    let order = 3.min(config.half_order());
    per_trial(config, "leibniz", |rng, t| {
        let m = rng.random_range(1..=config.dim.min(3));
        let f = random_expansion(rng, m, order);
        let g = random_expansion(rng, m, order);
        let n = rng.random_range(0..=3);
        let lhs = leibniz_lhs(&f, &g, n)?;
        let rhs = leibniz_rhs(&f, &g, n)?;
        let leibniz = lhs.max_abs_diff(&rhs)?;

        let ou = f.ou_apply().max_abs_diff(
            &GradedChaos::from_chaos(&f)
                .gradient()
                .divergence()?
                .to_chaos()
                .expect("no free slots"),
        )?;

        // E[(∇F, U)_H] = E[F δU]
        let u = random_graded(rng, m, 1, order);
        let lhs_pair = GradedChaos::from_chaos(&f)
            .gradient()
            .expected_pairing(&u)?;
        let du = u.divergence()?.to_chaos().expect("no free slots");
        let rhs_pair = f
            .product_with_cap(&du, config.max_order.max(2 * order + 1))?
            .expectation();

        let inputs = format!("{}/{n}", expansion_digest(&[&f, &g]));
        Ok(vec![
            CaseRecord::new(format!("leibniz/n{n}/{t}"), digest(&[inputs]), leibniz, tol),
            CaseRecord::new(
                format!("leibniz/ou/{t}"),
                expansion_digest(&[&f]),
                ou,
                TIGHT_TOL,
            ),
            CaseRecord::new(
                format!("leibniz/adjoint/{t}"),
                expansion_digest(&[&f, &du]),
                relative((lhs_pair - rhs_pair).abs(), rhs_pair),
                tol,
            ),
        ])
    })
}

// ---------------------------------------------------------------- stroock

/// `|E[∇^n F]| / (√(n!) ‖F‖)`, which is at most 1.
pub fn stroock_ratio(f: &ChaosExpansion, n: usize) -> f64 {
    let coeffs = stroock_coefficients(f);
    let lhs = coeffs.get(n).map_or(0.0, |c| c.norm());
    lhs / ((factorial(n) as f64).sqrt() * f.sobolev_norm2(0))
}

fn stroock_suite(config: &RunConfig) -> Result<Vec<CaseRecord>> {
    let mut cases = per_trial(config, "stroock", |rng, t| {
        let m = rng.random_range(1..=config.dim);
        let f = random_expansion(rng, m, config.max_order);
        let inputs = expansion_digest(&[&f]);
        let coeffs = stroock_coefficients(&f);
        let back = stroock_reconstruct(&coeffs)?;
        let round_trip = if back == f {
            0.0
        } else {
            back.max_abs_diff(&f)?.max(f64::MIN_POSITIVE)
        };
        let mut out = vec![CaseRecord::new(
            format!("stroock/round-trip/{t}"),
            inputs.clone(),
            round_trip,
            0.0,
        )];

        let mut worst_ratio: f64 = 0.0;
        let mut worst_gradient: f64 = 0.0;
        for n in 0..=f.max_order() {
            worst_ratio = worst_ratio.max(stroock_ratio(&f, n));
            // E[∇^n F] also as the order-0 part of n successive gradients
            let via_gradients = GradedChaos::from_chaos(&f).gradient_n(n).expectation();
            let direct = coeffs
                .get(n)
                .map_or_else(|| SymmetricTensor::zeros(m, n), |c| c.materialize());
            worst_gradient = worst_gradient.max(relative(
                direct.max_abs_diff(&via_gradients)?,
                direct.max_abs(),
            ));
        }
        out.push(CaseRecord::new(
            format!("stroock/bound/{t}"),
            inputs.clone(),
            worst_ratio,
            1.0 + TIGHT_TOL,
        ));
        out.push(CaseRecord::new(
            format!("stroock/expected-gradient/{t}"),
            inputs,
            worst_gradient,
            TIGHT_TOL,
        ));
        Ok(out)
    })?;

    let mut rng = stream_rng(config.seed, domain("stroock/equality"), 0);
    for n in 1..=config.max_order.min(4) {
        let h = random_unit_vector(&mut rng, config.dim);
        let f = ChaosExpansion::from_kernel(SymmetricTensor::tensor_power(&h, n));
        cases.push(CaseRecord::new(
            format!("stroock/equality/n{n}"),
            expansion_digest(&[&f]),
            (stroock_ratio(&f, n) - 1.0).abs(),
            TIGHT_TOL,
        ));
    }
    Ok(cases)
}

// ---------------------------------------------------------- cameron-martin

/// `δ^n` applied to the deterministic `h^{⊗n}`.
pub fn divergence_power(h: &SymmetricTensor, n: usize) -> Result<ChaosExpansion> {
    let mut u = GradedChaos::constant(SymmetricTensor::tensor_power(h, n));
    for _ in 0..n {
        u = u.divergence()?;
    }
    Ok(u.to_chaos().expect("all slots integrated"))
}

/// Worst relative error of `δ^n h^{⊗n}` against `|h|^n He_n(⟨h, ξ⟩ / |h|)`
/// over the given samples, relative to `max(|expected|, |h|^n)`.
pub fn divergence_power_error(
    h: &SymmetricTensor,
    n: usize,
    samples: &[GaussianSample],
) -> Result<f64> {
    let dn = divergence_power(h, n)?;
    let norm = h.norm();
    let coords: Vec<f64> = (0..h.dim()).map(|k| h.get(&[k])).collect();
    let mut worst: f64 = 0.0;
    for x in samples {
        let projection: f64 = coords
            .iter()
            .zip(x.as_slice())
            .map(|(a, b)| a * b)
            .sum::<f64>()
            / norm;
        let expected = norm.powi(n as i32) * hermite_eval(n, projection);
        let scale = expected.abs().max(norm.powi(n as i32));
        worst = worst.max((dn.evaluate(x)? - expected).abs() / scale);
    }
    Ok(worst)
}

fn cameron_martin_suite(config: &RunConfig) -> Result<Vec<CaseRecord>> {
    let half = config.half_order();
    let e1 = SymmetricTensor::basis(1, 0);
    let xi_sq = ChaosExpansion::from_terms(
        1,
        [
            SymmetricTensor::tensor_power(&e1, 2),
            SymmetricTensor::scalar(1, 1.0),
        ],
    )?;
    let fixture = (xi_sq.cameron_martin_pairing(&e1)? - 2.0).abs();
    let mut cases = vec![CaseRecord::new(
        "cameron-martin/fixture/xi-squared",
        expansion_digest(&[&xi_sq]),
        fixture,
        PAIRING_TOL,
    )];
    cases.extend(per_trial(config, "cameron-martin", |rng, t| {
        let m = rng.random_range(1..=config.dim);
        let f = random_expansion(rng, m, half);
        let h = random_vector(rng, m);
        let k = rng.random_range(f.max_order()..=config.max_order - f.max_order());
        let rho = wick_exponential(&h, k)?;
        let pairing = f.cameron_martin_pairing(&h)?;
        let via_product = f.product_with_cap(&rho, config.max_order)?.expectation();
        let inputs = digest(&[f.to_json_string(), h.to_json_string(), k.to_string()]);

        let n = 1 + (t as usize % config.max_order.min(4));
        let samples: Vec<GaussianSample> = (0..100)
            .map(|_| GaussianSample::new(standard_normals(rng, m)))
            .collect();
        let dn = divergence_power_error(&h, n, &samples)?;
        Ok(vec![
            CaseRecord::new(
                format!("cameron-martin/wick/{t}"),
                inputs,
                (pairing - via_product)
                    .abs()
                    .max((rho.expectation() - 1.0).abs()),
                PAIRING_TOL,
            ),
            CaseRecord::new(
                format!("cameron-martin/divergence-power/n{n}/{t}"),
                digest(&[h.to_json_string(), n.to_string()]),
                dn,
                ALGEBRAIC_TOL,
            ),
        ])
    })?);
    Ok(cases)
}

// ------------------------------------------------------------ isometry-mc

fn random_step_kernel<R: Rng + ?Sized>(rng: &mut R, grid: GridBasis, order: usize) -> StepKernel {
    StepKernel::new(grid, random_symmetric(rng, grid.n_steps(), order)).expect("grid dim")
}

/// Grid used for the pathwise and moment checks.
const SMALL_GRID: usize = 8;
/// Path budget of the pathwise product check.
const PATHWISE_PATHS: u64 = 10_000;

fn isometry_suite(config: &RunConfig) -> Result<Vec<CaseRecord>> {
    let (seed, paths, par) = (config.seed, config.paths, config.parallel);
    let grid = GridBasis::new(config.grid)?;
    let small = GridBasis::new(SMALL_GRID)?;
    let mut rng = stream_rng(seed, domain("isometry-mc/kernels"), 0);
    let f1 = random_step_kernel(&mut rng, grid, 1);
    let g1 = random_step_kernel(&mut rng, grid, 1);
    let f2 = random_step_kernel(&mut rng, grid, 2);
    let zero = StepKernel::new(grid, SymmetricTensor::zeros(grid.n_steps(), 2))?;

    let mut cases = vec![
        mc_isometry_test(
            "isometry-mc/p2q2",
            &f2,
            &f2,
            paths,
            seed,
            domain("iso/22"),
            par,
        )?,
        mc_isometry_test(
            "isometry-mc/p1q2",
            &f1,
            &f2,
            paths,
            seed,
            domain("iso/12"),
            par,
        )?,
        mc_isometry_test(
            "isometry-mc/p1q1",
            &f1,
            &g1,
            paths,
            seed,
            domain("iso/11"),
            par,
        )?,
        mc_isometry_test(
            "isometry-mc/zero",
            &zero,
            &f2,
            paths,
            seed,
            domain("iso/0"),
            par,
        )?,
    ];

    let pathwise = paths.min(PATHWISE_PATHS);
    for (p, q) in [(1, 1), (1, 2), (2, 2)] {
        let f = random_step_kernel(&mut rng, small, p);
        let g = random_step_kernel(&mut rng, small, q);
        let name = format!("isometry-mc/pathwise/p{p}q{q}");
        cases.push(mc_product_test(
            &name,
            &f,
            &g,
            pathwise,
            seed,
            domain(&name),
            par,
        )?);
    }

    // ΔW_1 ~ N(0, dt)
    let first: Vec<f64> = map_indices(paths, par, |i| {
        sample_path(grid, seed, domain("iso/dw"), i).increments()[0]
    });
    let stats = SampleStats::from_slice(&first);
    let squares: Vec<f64> = first.iter().map(|d| d * d).collect();
    let sq = SampleStats::from_slice(&squares);
    let dw_digest = digest(&[format!("dw/{seed}/{paths}/{}", grid.n_steps())]);
    cases.push(CaseRecord::new(
        "isometry-mc/increment-mean",
        dw_digest.clone(),
        stats.mean.abs(),
        SIGMA_THRESHOLD * stats.std_error,
    ));
    cases.push(CaseRecord::new(
        "isometry-mc/increment-variance",
        dw_digest,
        (sq.mean - grid.dt()).abs(),
        SIGMA_THRESHOLD * sq.std_error,
    ));

    // I_n(f) has mean 0 and variance n!|f|²
    for n in 1..=3 {
        let f = random_step_kernel(&mut rng, small, n);
        let chaos = kernel_chaos(&f);
        let label = format!("iso/moments/{n}");
        let values: Vec<f64> = map_indices(paths, par, |i| {
            chaos
                .evaluate(&sample_path(small, seed, domain(&label), i).coords())
                .expect("grid dim")
        });
        let s = SampleStats::from_slice(&values);
        let squares: Vec<f64> = values.iter().map(|v| v * v).collect();
        let sq = SampleStats::from_slice(&squares);
        let variance = factorial(n) as f64 * f.l2_inner(&f)?;
        let inputs = digest(&[
            f.values().to_json_string(),
            seed.to_string(),
            paths.to_string(),
        ]);
        cases.push(CaseRecord::new(
            format!("isometry-mc/moments/n{n}/mean"),
            inputs.clone(),
            s.mean.abs(),
            SIGMA_THRESHOLD * s.std_error,
        ));
        cases.push(CaseRecord::new(
            format!("isometry-mc/moments/n{n}/variance"),
            inputs,
            (sq.mean - variance).abs(),
            SIGMA_THRESHOLD * sq.std_error,
        ));
    }
    Ok(cases)
}

// -------------------------------------------------------- ito-convergence

/// Path budget per grid level of the convergence fit.
const ITO_PATHS: u64 = 2_000;

fn ito_suite(config: &RunConfig) -> Result<Vec<CaseRecord>> {
    let (seed, par) = (config.seed, config.parallel);
    let paths = config.paths.min(ITO_PATHS);
    let mut cases = Vec::new();

    // off-diagonal kernels: the strict-order sum is the chaos value
    let mut rng = stream_rng(seed, domain("ito/kernels"), 0);
    for n in ITO_LADDER {
        let grid = GridBasis::new(n)?;
        let f = random_step_kernel(&mut rng, grid, 2).off_diagonal();
        let chaos = kernel_chaos(&f);
        let worst = map_indices(paths.min(50), par, |i| {
            let path = sample_path(grid, seed, domain("ito/offdiag") ^ n as u64, i);
            let a = iterated_ito_sum(&f, &path).expect("order 2");
            (a - chaos.evaluate(&path.coords()).expect("grid dim")).abs()
        })
        .into_iter()
        .fold(0.0, f64::max);
        cases.push(CaseRecord::new(
            format!("ito-convergence/off-diagonal/N{n}"),
            digest(&[f.values().to_json_string(), seed.to_string()]),
            worst,
            TIGHT_TOL,
        ));
    }

    // f ≡ 1: E[gap²] = 2 dt on every level
    let conv =
        mc_ito_convergence_test(|_| 1.0, 2, &ITO_LADDER, paths, seed, domain("ito/gap"), par)?;
    for level in &conv.levels {
        cases.push(CaseRecord::new(
            format!("ito-convergence/gap2/N{}", level.n_steps),
            digest(&[format!("ones/{seed}/{paths}/{}", level.n_steps)]),
            (level.gap2.mean - 2.0 * level.dt()).abs(),
            SIGMA_THRESHOLD * level.gap2.std_error,
        ));
    }
    let (lo, hi) = GAP_SLOPE_RANGE;
    let centre = 0.5 * (lo + hi);
    cases.push(CaseRecord::new(
        "ito-convergence/slope",
        digest(&[format!("ones/{seed}/{paths}/{ITO_LADDER:?}")]),
        (conv.variance_slope - centre).abs(),
        0.5 * (hi - lo),
    ));

    let single = StepKernel::from_fn(GridBasis::new(1)?, 2, |_| 1.0);
    let level = gap_level(&single, paths, seed, domain("ito/single"), par)?;
    cases.push(CaseRecord::new(
        "ito-convergence/single-block",
        digest(&[format!("single/{seed}/{paths}")]),
        (level.gap2.mean - 2.0).abs(),
        SIGMA_THRESHOLD * level.gap2.std_error,
    ));
    Ok(cases)
}
