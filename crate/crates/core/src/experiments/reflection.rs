use alloc::vec::Vec;

use num_complex::Complex64;

use super::sampling::{random_similarity, sample_rng};
use super::Settings;
use crate::error::{Error, Result};
use crate::linalg::{normality_defect, polar_decompose, psd_power, CMatrix};
use crate::transform::{aluthge, check_lambda, limit};

/// Closed-form check for idempotent-like reflections `E = R L` with
/// `E² = I`: the iterates are `Δ_λⁿ(E) = R·L^{(1−2λ)ⁿ}`.
#[derive(Clone, Debug)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ReflectionReport {
    pub seed: u64,
    pub dim: usize,
    pub lambda: f64,
    pub n_max: usize,
    pub e: CMatrix,
    /// Unitary polar factor, a reflection `R = R* = R⁻¹`.
    pub r: CMatrix,
    /// `‖Δ_λⁿ(E) − R·L^{(1−2λ)ⁿ}‖₂ / ‖E‖₂` for `n = 1..=n_max`.
    pub relative_errors: Vec<f64>,
    pub max_relative_error: f64,
    /// `‖Δ_λ(E) − R‖₂`; zero in exact arithmetic when `λ = 1/2`.
    pub one_step_error: f64,
    /// `‖Δ_λ^∞(E) − R‖₂` from the generic iteration.
    pub limit_error: f64,
    pub limit_steps: usize,
    /// `‖R² − I‖₂`.
    pub reflection_defect: f64,
    pub pass: bool,
}

/// Tolerance on the closed form, relative to `‖E‖₂`.
const CLOSED_FORM_TOL: f64 = 1e-9;

/// `E = S·diag(1, …, 1, −1, …, −1)·S⁻¹` for a seeded `S`, read as `E = R L`
/// through its polar decomposition, and iterated `n_max` times.
pub fn reflection_oracle(seed: u64, dim: usize, lambda: f64, n_max: usize, settings: &Settings) -> Result<ReflectionReport> {
    check_lambda(lambda)?;
    if dim < 2 {
        return Err(Error::InvalidInput("a non-trivial reflection needs dimension at least 2"));
    }
    let mut rng = sample_rng(seed, 0);
    let (s, sinv) = random_similarity(&mut rng, dim, settings.cond_bound)?;
    let p = dim.div_ceil(2);
    let signs: Vec<Complex64> = (0..dim).map(|k| Complex64::new(if k < p { 1.0 } else { -1.0 }, 0.0)).collect();
    let e = &(&s * &CMatrix::diag(&signs)) * &sinv;
    let scale = e.frobenius_norm();
    if normality_defect(&e) <= 1e-8 * scale * scale {
        return Err(Error::ConstructionFailed("sampled reflection is already normal"));
    }
    let polar = polar_decompose(&e)?;
    let (r, l) = (polar.u, polar.p);
    let reflection_defect = (&r * &r).dist(&CMatrix::identity(dim));

    let mut relative_errors = Vec::with_capacity(n_max);
    let mut cur = e.clone();
    let mut exponent = 1.0;
    let mut one_step_error = f64::NAN;
    for n in 1..=n_max {
        cur = aluthge(&cur, lambda)?;
        exponent *= 1.0 - 2.0 * lambda;
        let closed = &r * &psd_power(&l, exponent)?;
        relative_errors.push(cur.dist(&closed) / scale);
        if n == 1 {
            one_step_error = cur.dist(&r);
        }
    }
    if n_max == 0 {
        one_step_error = aluthge(&e, lambda)?.dist(&r);
    }
    let lim = limit(&e, lambda, &settings.policy_for(&e))?;
    let limit_error = lim.matrix.dist(&r);
    let max_relative_error = relative_errors.iter().fold(0.0_f64, |m, &x| m.max(x));
    let half = (lambda - 0.5).abs() < 1e-15;
    let pass = max_relative_error <= CLOSED_FORM_TOL
        && limit_error <= 1e-8 * scale
        && (!half || one_step_error <= 1e-10);
    Ok(ReflectionReport {
        seed,
        dim,
        lambda,
        n_max,
        e,
        r,
        relative_errors,
        max_relative_error,
        one_step_error,
        limit_error,
        limit_steps: lim.trace.n_steps,
        reflection_defect,
        pass,
    })
}
