use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::Float;
use rand::Rng;

use super::sampling::{perturbation, sample_rng};
use super::Settings;
use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::tangent::{k_constant, DiagonalPoint};
use crate::transform::{iterate, IterationTrace, StopPolicy};

/// Allowed excess of a fitted rate over `k_{D,λ}`.
pub const RATE_SLACK: f64 = 0.05;

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct RateFit {
    pub rho_hat: f64,
    pub r_squared: f64,
    pub points: usize,
}

/// Geometric rate of `‖Δⁿ(T) − N‖₂` from a least-squares line through
/// `log‖Δⁿ(T) − N‖₂`.
///
/// Points at or below `100·ε·‖N‖₂` are noise and dropped; the fit uses the
/// last half of what remains.
pub fn rate_fit(trace: &IterationTrace, n_limit: &CMatrix) -> Result<RateFit> {
    if trace.iterates.len() < 5 {
        return Err(Error::InsufficientData(trace.iterates.len()));
    }
    let floor = 100.0 * f64::EPSILON * n_limit.frobenius_norm();
    let pts: Vec<(f64, f64)> = trace
        .iterates
        .iter()
        .enumerate()
        .map(|(n, it)| (n as f64, it.dist(n_limit)))
        .filter(|&(_, e)| e > floor)
        .map(|(n, e)| (n, e.ln()))
        .collect();
    let tail = &pts[pts.len() / 2..];
    if tail.len() < 3 {
        return Err(Error::InsufficientData(tail.len()));
    }
    let m = tail.len() as f64;
    let mx = tail.iter().map(|p| p.0).sum::<f64>() / m;
    let my = tail.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = tail.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let sxy: f64 = tail.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = tail.iter().map(|p| (p.1 - my) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let r_squared = if syy > 0.0 { (sxy * sxy) / (sxx * syy) } else { 1.0 };
    Ok(RateFit { rho_hat: slope.exp(), r_squared, points: tail.len() })
}

/// Continues a converged run down to the rounding floor so the limit used in
/// a rate fit is far more accurate than the stopping tolerance.
pub fn refine_limit(trace: &IterationTrace, extra_iters: usize) -> Result<CMatrix> {
    let last = trace.last();
    let scale = last.frobenius_norm().max(f64::MIN_POSITIVE);
    let tight = StopPolicy { step_tol: 4.0 * f64::EPSILON * scale, normality_tol: 4.0 * f64::EPSILON * scale * scale, max_iters: extra_iters.max(1) };
    Ok(iterate(last, trace.lambda, &tight)?.last().clone())
}

#[derive(Clone, Debug)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct RateCase {
    pub index: usize,
    pub d: Vec<Complex64>,
    pub lambda: f64,
    pub eps: f64,
    pub k: f64,
    pub n_steps: usize,
    pub fit: Option<RateFit>,
    pub pass: bool,
}

#[derive(Clone, Debug)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct RatesReport {
    pub seed: u64,
    pub eps: f64,
    pub cases: Vec<RateCase>,
    /// `max(ρ̂ − k)` over the fitted cases.
    pub max_excess: f64,
    pub pass: bool,
}

impl RatesReport {
    pub fn assemble(seed: u64, eps: f64, cases: Vec<RateCase>) -> Self {
        let max_excess = cases
            .iter()
            .filter_map(|c| c.fit.map(|f| f.rho_hat - c.k))
            .fold(f64::NEG_INFINITY, f64::max);
        Self { seed, eps, pass: cases.iter().all(|c| c.pass), cases, max_excess }
    }
}

/// Case `index` of the rate suite: `r ∈ {2, 3}` alternating, moduli in
/// `[0.5, 3)`, phases in `[0, 2π)`, `λ ∈ [0.1, 0.9)`, and the start
/// `exp(εA) D exp(−εA)`.
pub fn rate_case(seed: u64, index: usize, eps: f64, settings: &Settings) -> Result<RateCase> {
    let mut rng = sample_rng(seed, index as u64);
    let r = 2 + index % 2;
    let d: Vec<Complex64> = (0..r)
        .map(|_| {
            let m: f64 = rng.random_range(0.5..3.0);
            let th: f64 = rng.random_range(0.0..core::f64::consts::TAU);
            Complex64::from_polar(m, th)
        })
        .collect();
    let lambda: f64 = rng.random_range(0.1..0.9);
    let k = k_constant(&DiagonalPoint::new(d.clone())?, lambda)?;
    let t = perturbation(&mut rng, &d, eps)?;
    let trace = iterate(&t, lambda, &settings.policy_for(&t))?;
    let fit = if trace.converged() {
        let n = refine_limit(&trace, settings.max_iters)?;
        rate_fit(&trace, &n).ok()
    } else {
        None
    };
    Ok(RateCase {
        index,
        pass: fit.is_some_and(|f| f.rho_hat <= k + RATE_SLACK),
        d,
        lambda,
        eps,
        k,
        n_steps: trace.n_steps,
        fit,
    })
}

/// `count` seeded cases of [`rate_case`].
pub fn rates_suite(seed: u64, count: usize, eps: f64, settings: &Settings) -> Result<RatesReport> {
    let cases = (0..count).map(|i| rate_case(seed, i, eps, settings)).collect::<Result<Vec<_>>>()?;
    Ok(RatesReport::assemble(seed, eps, cases))
}
