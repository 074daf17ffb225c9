//! Numerical experiments on the limit map `R_T(λ) = Δ_λ^∞(T)`.
//!
//! Every experiment is deterministic given its seed; reports serialize with
//! the `serde` feature. Functions that loop over independent samples also
//! expose the per-sample step and an `assemble` constructor so callers can
//! evaluate samples in parallel and still aggregate in index order.

mod constancy;
mod permutation;
mod rates;
mod reflection;
mod sampling;
mod triangular;

pub use constancy::{
    conjecture_probe, nonconstancy_witness, probe_sample, two_eigenvalue_constancy, ConjectureReport,
    ProbeSample, TwoEigenvalueReport, WitnessReport, WitnessStatus,
};
pub use permutation::{cyclic_permutation, permutation_example, PermutationReport};
pub use rates::{
    rate_case, rate_fit, rates_suite, refine_limit, RateCase, RateFit, RatesReport, RATE_SLACK,
};
pub use reflection::{reflection_oracle, ReflectionReport};
pub use sampling::{
    gaussian_matrix, orbit_element, orbit_sample, perturbation, random_similarity, random_unitary,
    sample_rng, OrbitSample, DEFAULT_COND_BOUND,
};
pub use triangular::{triangular_example, ExampleEntry, TriangularReport, EXAMPLE_ATOL};

use alloc::vec::Vec;

use crate::error::Result;
use crate::linalg::CMatrix;
use crate::transform::{check_limit, LambdaScan, StopPolicy, StopReason};

/// Stopping and sampling knobs shared by all experiments.
///
/// Unset tolerances fall back to [`StopPolicy::for_matrix`] for each matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Settings {
    pub step_tol: Option<f64>,
    pub normality_tol: Option<f64>,
    pub max_iters: usize,
    pub cond_bound: f64,
}

impl Default for Settings {
    fn default() -> Self {
        Self { step_tol: None, normality_tol: None, max_iters: 20_000, cond_bound: DEFAULT_COND_BOUND }
    }
}

impl Settings {
    pub fn policy_for(&self, t: &CMatrix) -> StopPolicy {
        let base = StopPolicy::for_matrix(t);
        StopPolicy {
            step_tol: self.step_tol.unwrap_or(base.step_tol),
            normality_tol: self.normality_tol.unwrap_or(base.normality_tol),
            max_iters: self.max_iters,
        }
    }
}

/// True when every converged limit of the scan is normal within its policy and
/// keeps the eigenvalues of `t`.
pub fn scan_limits_ok(t: &CMatrix, scan: &LambdaScan, policy: &StopPolicy) -> Result<bool> {
    for (l, s) in scan.limits.iter().zip(&scan.status) {
        if *s == StopReason::Converged {
            let f = check_limit(t, l, policy)?;
            if f.normality_violated || f.spectrum_violated {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The grid `0.1, 0.2, …, 0.9`.
pub fn default_grid() -> Vec<f64> {
    crate::transform::default_grid()
}
