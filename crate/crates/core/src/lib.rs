//! Finite-dimensional Wiener chaos: symmetric tensor kernels, multiple
//! integrals and their products, Malliavin gradient and divergence, and
//! Monte Carlo checks of the continuous-time constructions.

pub mod chaos;
pub mod combinatorics;
pub mod error;
pub mod hermite;
pub mod montecarlo;
pub mod parallel;
pub mod random;
pub mod report;
pub mod rng;
pub mod suites;
pub mod symtensor;

pub use chaos::{ChaosExpansion, GaussianSample, GradedChaos};
pub use error::{ChaosError, Result};
pub use report::{CaseRecord, VerificationReport};
pub use suites::{run_suite, RunConfig};
pub use symtensor::{MultiIndex, SymmetricTensor};
