//! Is `λ ↦ R_T(λ)` constant on an orbit?
//!
//! Two equal-modulus eigenvalues: always constant. Two distinct moduli: some
//! orbit element is not. Three or more equal-modulus eigenvalues: open; the
//! probe here only collects evidence.

use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::Float;

use super::sampling::{gaussian_matrix, orbit_element, random_unitary, sample_rng};
use super::{scan_limits_ok, Settings};
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, CMatrix};
use crate::tangent::EQUALITY_TOL;
use crate::transform::{check_lambda, limit, r_map, LambdaScan};

#[derive(Clone, Debug)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct TwoEigenvalueReport {
    pub d1: Complex64,
    pub d2: Complex64,
    /// Multiplicities of `d1` and `d2`.
    pub n: usize,
    pub k: usize,
    pub seed: u64,
    pub matrix: CMatrix,
    pub scan: LambdaScan,
    /// Singular values of the coupling block `B = (d1 − d2)A`.
    pub singular_values: Vec<f64>,
    /// `‖W T₀ W* − [[d1 I, Σ], [0, d2 I]]‖₂` for the block triangular start `T₀`.
    pub block_error: f64,
    /// `max_λ ‖R_T(λ) − (conjugated direct sum of 2×2 limits)‖₂`.
    pub block_limit_error: f64,
    pub limits_ok: bool,
    pub pass: bool,
}

/// Dispersion bound for the constant cases.
const CONSTANT_TOL: f64 = 1e-6;

fn rect(n: usize, k: usize, f: impl Fn(usize, usize) -> Complex64) -> Vec<Vec<Complex64>> {
    (0..n).map(|i| (0..k).map(|j| f(i, j)).collect()).collect()
}

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn vnorm(a: &[Complex64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Samples `T = W₀·[[d1 I_n, (d1 − d2)A], [0, d2 I_k]]·W₀*` (`A` Gaussian, `W₀`
/// unitary), scans `R_T` over `lambdas`, and rebuilds the block reduction
/// `⊕ [[d1, s_i], [0, d2]] ⊕ d2 I_{k−n}` from the singular values of `B`.
pub fn two_eigenvalue_constancy(
    d1: Complex64,
    d2: Complex64,
    n: usize,
    k: usize,
    seed: u64,
    lambdas: &[f64],
    settings: &Settings,
) -> Result<TwoEigenvalueReport> {
    if (d1.norm() - d2.norm()).abs() > 1e-12 * d1.norm().max(d2.norm()) {
        return Err(Error::InvalidInput("d1 and d2 must have equal moduli"));
    }
    if (d1 - d2).norm() <= EQUALITY_TOL * d1.norm() || d1.norm() == 0.0 {
        return Err(Error::InvalidInput("d1 and d2 must be distinct and non-zero"));
    }
    if n == 0 || k == 0 {
        return Err(Error::InvalidInput("both eigenvalues need positive multiplicity"));
    }
    // The reduction wants dim S1 ≤ dim S2; relabel if needed.
    let (d1, d2, n, k) = if n <= k { (d1, d2, n, k) } else { (d2, d1, k, n) };
    let r = n + k;
    let mut rng = sample_rng(seed, 0);
    let g = gaussian_matrix(&mut rng, r);
    let b = rect(n, k, |i, j| g[(i, n + j)] * (d1 - d2));
    let t0 = CMatrix::from_fn(r, |i, j| match (i < n, j < n) {
        (true, true) if i == j => d1,
        (false, false) if i == j => d2,
        (true, false) => b[i][j - n],
        _ => Complex64::new(0.0, 0.0),
    });
    let w0 = random_unitary(&mut rng, r)?;
    let t = t0.conjugate_by(&w0);

    // B B* = U diag(s²) U*, v_i = B* u_i / s_i, completed to a basis of C^k.
    let bbs = CMatrix::from_fn(n, |i, j| (0..k).map(|m| b[i][m] * b[j][m].conj()).sum());
    let (vals, u) = hermitian_eig(&bbs)?;
    let order: Vec<usize> = (0..n).rev().collect();
    let s: Vec<f64> = order.iter().map(|&i| vals[i].max(0.0).sqrt()).collect();
    let u = u.permute_columns(&order);
    if s.iter().any(|&x| x <= 1e-12) {
        return Err(Error::ConstructionFailed("coupling block is rank deficient"));
    }
    let mut vcols: Vec<Vec<Complex64>> = (0..n)
        .map(|i| (0..k).map(|m| (0..n).map(|p| b[p][m].conj() * u[(p, i)]).sum::<Complex64>() / s[i]).collect())
        .collect();
    for e in 0..k {
        if vcols.len() == k {
            break;
        }
        let mut v: Vec<Complex64> = (0..k).map(|m| Complex64::new(if m == e { 1.0 } else { 0.0 }, 0.0)).collect();
        for _ in 0..2 {
            for q in &vcols {
                let c = dot(q, &v);
                for (x, y) in v.iter_mut().zip(q) {
                    *x -= c * y;
                }
            }
        }
        let nv = vnorm(&v);
        if nv > 1e-8 {
            vcols.push(v.iter().map(|z| z / nv).collect());
        }
    }
    // W = U* ⊕ V*
    let w = CMatrix::from_fn(r, |i, j| match (i < n, j < n) {
        (true, true) => u[(j, i)].conj(),
        (false, false) => vcols[i - n][j - n].conj(),
        _ => Complex64::new(0.0, 0.0),
    });
    let reduced = CMatrix::from_fn(r, |i, j| match (i < n, j < n) {
        (true, true) if i == j => d1,
        (false, false) if i == j => d2,
        (true, false) if j - n == i => Complex64::new(s[i], 0.0),
        _ => Complex64::new(0.0, 0.0),
    });
    let block_error = t0.conjugate_by(&w).dist(&reduced);

    let policy = settings.policy_for(&t);
    let scan = r_map(&t, lambdas, &policy)?;
    let limits_ok = scan_limits_ok(&t, &scan, &policy)?;
    let basis = &w0 * &w.adjoint();
    let mut block_limit_error: f64 = 0.0;
    for (idx, &lambda) in lambdas.iter().enumerate() {
        let mut assembled = CMatrix::zeros(r);
        for (i, &si) in s.iter().enumerate() {
            let blk = CMatrix::from_rows(&[[d1, Complex64::new(si, 0.0)], [Complex64::new(0.0, 0.0), d2]]);
            let l = limit(&blk, lambda, &settings.policy_for(&blk))?.matrix;
            assembled[(i, i)] = l[(0, 0)];
            assembled[(i, n + i)] = l[(0, 1)];
            assembled[(n + i, i)] = l[(1, 0)];
            assembled[(n + i, n + i)] = l[(1, 1)];
        }
        for j in n..k {
            assembled[(n + j, n + j)] = d2;
        }
        block_limit_error = block_limit_error.max(scan.limits[idx].dist(&assembled.conjugate_by(&basis)));
    }
    let scale = t.frobenius_norm().max(1.0);
    Ok(TwoEigenvalueReport {
        d1,
        d2,
        n,
        k,
        seed,
        pass: scan.all_converged()
            && scan.dispersion <= CONSTANT_TOL
            && block_error <= 1e-8 * scale
            && block_limit_error <= 1e-6 * scale
            && limits_ok,
        matrix: t,
        scan,
        singular_values: s,
        block_error,
        block_limit_error,
        limits_ok,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub enum WitnessStatus {
    Found,
    /// No sample exceeded the threshold. Not a proof of constancy.
    NoWitnessFound,
}

#[derive(Clone, Debug)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct WitnessReport {
    pub d: Vec<Complex64>,
    pub seed: u64,
    pub threshold: f64,
    pub lambdas: Vec<f64>,
    pub status: WitnessStatus,
    pub witness_index: Option<usize>,
    pub witness: Option<CMatrix>,
    pub witness_scan: Option<LambdaScan>,
    /// Dispersion of each sample tried, in order.
    pub dispersions: Vec<f64>,
    pub max_dispersion: f64,
    pub samples_tried: usize,
}

/// Searches up to `budget` orbit samples of `diag(d)` for one whose limits at
/// `λ = 0.3` and `0.7` differ by more than `threshold`.
pub fn nonconstancy_witness(d: &[Complex64], seed: u64, threshold: f64, budget: usize, settings: &Settings) -> Result<WitnessReport> {
    let lambdas = alloc::vec![0.3, 0.7];
    let mut dispersions = Vec::new();
    for idx in 0..budget {
        let (t, _) = orbit_element(seed, idx as u64, d, settings.cond_bound)?;
        let scan = r_map(&t, &lambdas, &settings.policy_for(&t))?;
        dispersions.push(scan.dispersion);
        if scan.dispersion > threshold {
            return Ok(WitnessReport {
                d: d.to_vec(),
                seed,
                threshold,
                lambdas,
                status: WitnessStatus::Found,
                witness_index: Some(idx),
                witness: Some(t),
                witness_scan: Some(scan),
                max_dispersion: dispersions.iter().fold(0.0, |m: f64, &x| m.max(x)),
                samples_tried: idx + 1,
                dispersions,
            });
        }
    }
    Ok(WitnessReport {
        d: d.to_vec(),
        seed,
        threshold,
        lambdas,
        status: WitnessStatus::NoWitnessFound,
        witness_index: None,
        witness: None,
        witness_scan: None,
        max_dispersion: dispersions.iter().fold(0.0, |m: f64, &x| m.max(x)),
        samples_tried: budget,
        dispersions,
    })
}

#[derive(Clone, Debug)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ProbeSample {
    pub index: usize,
    pub matrix: CMatrix,
    pub dispersion: f64,
    pub max_steps: usize,
    pub converged: bool,
    pub limits_ok: bool,
}

#[derive(Clone, Debug)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ConjectureReport {
    pub d: Vec<Complex64>,
    pub seed: u64,
    pub lambdas: Vec<f64>,
    pub distinct_eigenvalues: usize,
    pub samples: Vec<ProbeSample>,
    pub max_dispersion: f64,
    pub argmax_index: Option<usize>,
}

impl ConjectureReport {
    /// Aggregates samples given in index order.
    pub fn assemble(d: &[Complex64], seed: u64, lambdas: &[f64], samples: Vec<ProbeSample>) -> Self {
        let mut best: Option<(usize, f64)> = None;
        for s in &samples {
            if s.converged && best.is_none_or(|(_, m)| s.dispersion > m) {
                best = Some((s.index, s.dispersion));
            }
        }
        let distinct = (0..d.len())
            .filter(|&i| (0..i).all(|j| (d[i] - d[j]).norm() > EQUALITY_TOL * d[i].norm().max(d[j].norm())))
            .count();
        Self {
            d: d.to_vec(),
            seed,
            lambdas: lambdas.to_vec(),
            distinct_eigenvalues: distinct,
            samples,
            max_dispersion: best.map_or(0.0, |b| b.1),
            argmax_index: best.map(|b| b.0),
        }
    }
}

fn check_equal_moduli(d: &[Complex64]) -> Result<()> {
    let m0 = d.first().ok_or(Error::InvalidInput("empty diagonal"))?.norm();
    if m0 == 0.0 || d.iter().any(|z| (z.norm() - m0).abs() > EQUALITY_TOL * m0) {
        return Err(Error::InvalidInput("all entries must share one non-zero modulus"));
    }
    Ok(())
}

/// One orbit sample of the conjecture probe.
pub fn probe_sample(d: &[Complex64], seed: u64, index: usize, lambdas: &[f64], settings: &Settings) -> Result<ProbeSample> {
    check_equal_moduli(d)?;
    let (t, _) = orbit_element(seed, index as u64, d, settings.cond_bound)?;
    let policy = settings.policy_for(&t);
    let scan = r_map(&t, lambdas, &policy)?;
    Ok(ProbeSample {
        index,
        dispersion: scan.dispersion,
        max_steps: scan.n_steps.iter().copied().max().unwrap_or(0),
        converged: scan.all_converged(),
        limits_ok: scan_limits_ok(&t, &scan, &policy)?,
        matrix: t,
    })
}

/// Largest λ-dispersion found over `samples` orbit elements of an
/// equal-modulus `diag(d)`. Evidence only; no verdict.
pub fn conjecture_probe(d: &[Complex64], samples: usize, seed: u64, lambdas: &[f64], settings: &Settings) -> Result<ConjectureReport> {
    check_equal_moduli(d)?;
    for &l in lambdas {
        check_lambda(l)?;
    }
    let results = (0..samples).map(|i| probe_sample(d, seed, i, lambdas, settings)).collect::<Result<Vec<_>>>()?;
    Ok(ConjectureReport::assemble(d, seed, lambdas, results))
}
