use alloc::vec::Vec;

use num_complex::Complex64;

use super::Settings;
use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::transform::{aluthge, check_lambda, limit};

/// The cyclic permutation `e_1 → e_2 → e_3 → e_1`.
pub fn cyclic_permutation() -> CMatrix {
    CMatrix::from_real_rows(&[[0.0, 0.0, 1.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]])
}

/// `T = P·diag(a, b, c)` with `abc = 1`: every iterate stays of the form
/// `P·D_n` with `D_n` positive diagonal of determinant one, and the limit is `P`.
#[derive(Clone, Debug)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct PermutationReport {
    pub abc: [f64; 3],
    pub lambdas: Vec<f64>,
    pub limits: Vec<CMatrix>,
    pub n_steps: Vec<usize>,
    /// `max_λ ‖Δ_λ^∞(T) − P‖₂`.
    pub max_limit_error: f64,
    pub dispersion: f64,
    /// Largest off-diagonal or non-real entry of `P*·Δⁿ(T)` over the checked iterates.
    pub max_form_error: f64,
    /// Largest `|det D_n − 1|`.
    pub max_det_error: f64,
    pub min_diagonal: f64,
    pub pass: bool,
}

/// Iterates checked for the `P·D_n` form, per λ.
const FORM_STEPS: usize = 25;

pub fn permutation_example(a: f64, b: f64, c: f64, lambdas: &[f64], settings: &Settings) -> Result<PermutationReport> {
    if !(a > 0.0 && b > 0.0 && c > 0.0) || ((a * b * c) - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidInput("need positive a, b, c with abc = 1"));
    }
    for &l in lambdas {
        check_lambda(l)?;
    }
    let p = cyclic_permutation();
    let t = &p * &CMatrix::diag_real(&[a, b, c]);
    let policy = settings.policy_for(&t);
    let (mut form, mut det, mut min_diag): (f64, f64, f64) = (0.0, 0.0, f64::INFINITY);
    let mut limits = Vec::new();
    let mut n_steps = Vec::new();
    for &lambda in lambdas {
        let mut cur = t.clone();
        for _ in 0..FORM_STEPS {
            cur = aluthge(&cur, lambda)?;
            let dn = &p.adjoint() * &cur;
            let mut prod = Complex64::new(1.0, 0.0);
            for i in 0..3 {
                for j in 0..3 {
                    let z = dn[(i, j)];
                    if i == j {
                        form = form.max(z.im.abs());
                        min_diag = min_diag.min(z.re);
                        prod *= z;
                    } else {
                        form = form.max(z.norm());
                    }
                }
            }
            det = det.max((prod - 1.0).norm());
        }
        let lim = limit(&t, lambda, &policy)?;
        n_steps.push(lim.trace.n_steps);
        limits.push(lim.matrix);
    }
    let max_limit_error = limits.iter().map(|l| l.dist(&p)).fold(0.0, f64::max);
    let mut dispersion: f64 = 0.0;
    for i in 0..limits.len() {
        for j in i + 1..limits.len() {
            dispersion = dispersion.max(limits[i].dist(&limits[j]));
        }
    }
    Ok(PermutationReport {
        abc: [a, b, c],
        lambdas: lambdas.to_vec(),
        limits,
        n_steps,
        pass: max_limit_error <= 1e-8 && dispersion <= 1e-7 && form <= 1e-10 && det <= 1e-10 && min_diag > 0.0,
        max_limit_error,
        dispersion,
        max_form_error: form,
        max_det_error: det,
        min_diagonal: min_diag,
    })
}
