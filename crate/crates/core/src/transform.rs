//! The λ-Aluthge transform and its iteration.
//!
//! All transforms go through one SVD `T = W Σ V*`. With `G = T V = W Σ` the
//! transform is
//!
//! ```text
//! Δ_λ(T) = V · diag(σ^λ) · (V* G) · diag(σ^{-λ}) · V*
//! ```
//!
//! where `σ_k^{-λ}` is replaced by `0` on the numerical kernel. This equals
//! `|T|^λ U |T|^{1-λ}` for every `T` and `|T|^λ T |T|^{-λ}` for invertible `T`,
//! without ever forming `U` or dividing by a tiny singular value twice.

use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::Float;

use crate::error::{Error, Result};
use crate::linalg::{
    eigenvalues, is_diagonalizable, multiset_distance, normality_defect, svd, CMatrix, Svd,
    DEFAULT_CLUSTER_TOL,
};

pub(crate) fn check_lambda(lambda: f64) -> Result<()> {
    if lambda > 0.0 && lambda < 1.0 {
        Ok(())
    } else {
        Err(Error::LambdaOutOfRange(lambda))
    }
}

/// `diag(σ^λ) · V* G · diag(σ^{-λ})`, the transform written in the basis `V`.
fn core_in_v_basis(s: &Svd, lambda: f64) -> CMatrix {
    let n = s.v.dim();
    let thr = s.rank_threshold();
    let vg = &s.v.adjoint() * &s.g;
    let left: Vec<f64> = s.sigma.iter().map(|&x| if x > thr { x.powf(lambda) } else { 0.0 }).collect();
    let right: Vec<f64> = s.sigma.iter().map(|&x| if x > thr { x.powf(-lambda) } else { 0.0 }).collect();
    CMatrix::from_fn(n, |i, j| {
        if left[i] == 0.0 || right[j] == 0.0 {
            Complex64::new(0.0, 0.0)
        } else {
            vg[(i, j)] * (left[i] * right[j])
        }
    })
}

/// `Δ_λ(T) = |T|^λ U |T|^{1-λ}` for `0 < λ < 1`.
pub fn aluthge(t: &CMatrix, lambda: f64) -> Result<CMatrix> {
    check_lambda(lambda)?;
    let s = svd(t)?;
    Ok(core_in_v_basis(&s, lambda).conjugate_by(&s.v))
}

/// The Duggal transform `Δ_1(T) = |T| U`.
pub fn duggal(t: &CMatrix) -> Result<CMatrix> {
    let s = svd(t)?;
    let n = t.dim();
    let rank = s.rank();
    let vw = &s.v.adjoint() * &s.w;
    let core = CMatrix::from_fn(n, |i, j| if j < rank { vw[(i, j)] * s.sigma[i] } else { Complex64::new(0.0, 0.0) });
    Ok(core.conjugate_by(&s.v))
}

/// When an iteration counts as finished.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct StopPolicy {
    /// Bound on `‖Δ^{n+1} − Δ^n‖₂`.
    pub step_tol: f64,
    /// Bound on `‖T*T − TT*‖₂` of the last iterate.
    pub normality_tol: f64,
    pub max_iters: usize,
}

impl StopPolicy {
    pub fn new(step_tol: f64, normality_tol: f64, max_iters: usize) -> Result<Self> {
        let ok = |x: f64| x > 0.0 && x.is_finite();
        if !ok(step_tol) || !ok(normality_tol) {
            return Err(Error::InvalidInput("stop tolerances must be positive and finite"));
        }
        if max_iters == 0 {
            return Err(Error::InvalidInput("max_iters must be at least 1"));
        }
        Ok(Self { step_tol, normality_tol, max_iters })
    }

    /// `step_tol = 1e-11‖T‖₂`, `normality_tol = 1e-9‖T‖₂`, 20000 iterations.
    pub fn for_matrix(t: &CMatrix) -> Self {
        let scale = t.frobenius_norm();
        let scale = if scale > 0.0 { scale } else { f64::MIN_POSITIVE };
        Self { step_tol: 1e-11 * scale, normality_tol: 1e-9 * scale, max_iters: 20_000 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub enum StopReason {
    Converged,
    MaxIters,
    NonFinite,
}

/// Full record of one run `T, Δ_λ(T), Δ_λ²(T), …`.
#[derive(Clone, Debug)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct IterationTrace {
    pub lambda: f64,
    /// Starting matrix first; `n_steps + 1` entries.
    pub iterates: Vec<CMatrix>,
    pub step_norms: Vec<f64>,
    pub normality_defects: Vec<f64>,
    pub stop_reason: StopReason,
    pub n_steps: usize,
}

impl IterationTrace {
    pub fn last(&self) -> &CMatrix {
        self.iterates.last().expect("trace always holds the start")
    }

    pub fn converged(&self) -> bool {
        self.stop_reason == StopReason::Converged
    }
}

/// Iterates `Δ_λ` until `policy` is met.
///
/// A start that is already normal and essentially fixed is reported with
/// `n_steps = 0` and the start itself as the limit.
pub fn iterate(t: &CMatrix, lambda: f64, policy: &StopPolicy) -> Result<IterationTrace> {
    check_lambda(lambda)?;
    let mut trace = IterationTrace {
        lambda,
        iterates: alloc::vec![t.clone()],
        step_norms: Vec::new(),
        normality_defects: Vec::new(),
        stop_reason: StopReason::MaxIters,
        n_steps: 0,
    };
    if !t.is_finite() {
        trace.stop_reason = StopReason::NonFinite;
        return Ok(trace);
    }
    let mut cur = t.clone();
    if normality_defect(&cur) <= policy.normality_tol {
        if let Ok(next) = aluthge(&cur, lambda) {
            if next.dist(&cur) <= policy.step_tol {
                trace.stop_reason = StopReason::Converged;
                return Ok(trace);
            }
        }
    }
    for _ in 0..policy.max_iters {
        let next = match aluthge(&cur, lambda) {
            Ok(m) if m.is_finite() => m,
            _ => {
                trace.stop_reason = StopReason::NonFinite;
                return Ok(trace);
            }
        };
        let step = next.dist(&cur);
        let defect = normality_defect(&next);
        trace.step_norms.push(step);
        trace.normality_defects.push(defect);
        trace.iterates.push(next.clone());
        trace.n_steps += 1;
        cur = next;
        if step <= policy.step_tol && defect <= policy.normality_tol {
            trace.stop_reason = StopReason::Converged;
            return Ok(trace);
        }
    }
    Ok(trace)
}

/// Post-hoc checks on a computed limit.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct LimitFlags {
    /// The start failed the diagonalizability test; convergence is not guaranteed.
    pub not_diagonalizable: bool,
    pub normality_violated: bool,
    pub spectrum_violated: bool,
}

impl LimitFlags {
    pub fn any(&self) -> bool {
        self.not_diagonalizable || self.normality_violated || self.spectrum_violated
    }
}

#[derive(Clone, Debug)]
pub struct Limit {
    pub matrix: CMatrix,
    pub trace: IterationTrace,
    pub flags: LimitFlags,
}

/// Tolerance for eigenvalue-multiset preservation, scaled by `max(1, ‖T‖₂)`.
pub const SPECTRUM_TOL: f64 = 1e-6;

/// Checks a limit against its start: normal within `normality_tol`, same
/// eigenvalues within [`SPECTRUM_TOL`].
pub fn check_limit(t: &CMatrix, l: &CMatrix, policy: &StopPolicy) -> Result<LimitFlags> {
    let scale = t.frobenius_norm().max(1.0);
    let d = multiset_distance(&eigenvalues(t)?, &eigenvalues(l)?);
    Ok(LimitFlags {
        not_diagonalizable: !is_diagonalizable(t, DEFAULT_CLUSTER_TOL)?,
        normality_violated: normality_defect(l) > policy.normality_tol,
        spectrum_violated: !(d <= SPECTRUM_TOL * scale),
    })
}

/// `Δ_λ^∞(T)`, the final iterate of a converged run, with post-hoc flags.
pub fn limit(t: &CMatrix, lambda: f64, policy: &StopPolicy) -> Result<Limit> {
    let trace = iterate(t, lambda, policy)?;
    if !trace.converged() {
        return Err(Error::DidNotConverge(alloc::boxed::Box::new(trace)));
    }
    let matrix = trace.last().clone();
    let flags = check_limit(t, &matrix, policy)?;
    Ok(Limit { matrix, trace, flags })
}

/// Reduction of a singular `T` to an invertible block after one step.
#[derive(Clone, Debug)]
pub struct SingularSplit {
    /// `Δ_λ(T)` compressed to `ker(Δ_λ(T))^⊥`.
    pub t1: CMatrix,
    pub kernel_dim: usize,
    /// Unitary whose first `dim − kernel_dim` columns span `ker^⊥` and the rest `ker`.
    pub basis: CMatrix,
    /// `basis* Δ_λ(T) basis = t1 ⊕ 0`, with the zero block exact.
    pub block: CMatrix,
}

/// One step of `Δ_λ` followed by the split `ker^⊥ ⊕ ker`.
///
/// For diagonalizable `T`, `ker T` has the dimension of the algebraic
/// multiplicity of `0`, and `Δ_λ(T)` maps into `(ker T)^⊥` and kills `ker T`.
/// In the right-singular basis of `T` the zero rows and columns are exact.
pub fn split_singular(t: &CMatrix, lambda: f64) -> Result<SingularSplit> {
    check_lambda(lambda)?;
    if !is_diagonalizable(t, DEFAULT_CLUSTER_TOL)? {
        return Err(Error::NotDiagonalizable);
    }
    let s = svd(t)?;
    let rank = s.rank();
    let block = core_in_v_basis(&s, lambda);
    Ok(SingularSplit {
        t1: block.principal_block(0, rank),
        kernel_dim: t.dim() - rank,
        basis: s.v,
        block,
    })
}

/// `R_T(λ)` on a grid.
#[derive(Clone, Debug)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct LambdaScan {
    pub lambdas: Vec<f64>,
    /// Final iterate per λ (converged or not, see `status`).
    pub limits: Vec<CMatrix>,
    pub status: Vec<StopReason>,
    pub n_steps: Vec<usize>,
    /// Max pairwise Frobenius distance between converged limits.
    pub dispersion: f64,
    pub diagonalizable: bool,
    #[cfg_attr(feature = "serde", serde(skip))]
    pub traces: Vec<IterationTrace>,
}

impl LambdaScan {
    /// Assembles a scan from traces given in grid order.
    pub fn from_traces(traces: Vec<IterationTrace>, diagonalizable: bool) -> Self {
        let limits: Vec<CMatrix> = traces.iter().map(|t| t.last().clone()).collect();
        let status: Vec<StopReason> = traces.iter().map(|t| t.stop_reason).collect();
        let ok: Vec<&CMatrix> = limits.iter().zip(&status).filter(|(_, s)| **s == StopReason::Converged).map(|(l, _)| l).collect();
        let mut dispersion = 0.0_f64;
        for i in 0..ok.len() {
            for j in i + 1..ok.len() {
                dispersion = dispersion.max(ok[i].dist(ok[j]));
            }
        }
        Self {
            lambdas: traces.iter().map(|t| t.lambda).collect(),
            n_steps: traces.iter().map(|t| t.n_steps).collect(),
            limits,
            status,
            dispersion,
            diagonalizable,
            traces,
        }
    }

    pub fn all_converged(&self) -> bool {
        self.status.iter().all(|s| *s == StopReason::Converged)
    }
}

/// Default grid `0.1, 0.2, …, 0.9`.
pub fn default_grid() -> Vec<f64> {
    (1..=9).map(|k| k as f64 / 10.0).collect()
}

/// Runs the iteration for every λ in order. Failed points stay in the scan
/// with their stop reason and are left out of the dispersion.
pub fn r_map(t: &CMatrix, lambdas: &[f64], policy: &StopPolicy) -> Result<LambdaScan> {
    for &l in lambdas {
        check_lambda(l)?;
    }
    let diagonalizable = is_diagonalizable(t, DEFAULT_CLUSTER_TOL)?;
    let traces = lambdas.iter().map(|&l| iterate(t, l, policy)).collect::<Result<Vec<_>>>()?;
    Ok(LambdaScan::from_traces(traces, diagonalizable))
}
