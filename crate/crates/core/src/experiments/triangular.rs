use alloc::vec::Vec;

use num_complex::Complex64;

use super::Settings;
use crate::error::Result;
use crate::linalg::{eigenvalues, multiset_distance, CMatrix};
use crate::transform::limit;

/// Entrywise tolerance against the published 5-digit values.
pub const EXAMPLE_ATOL: f64 = 1e-3;

const START: [[f64; 2]; 2] = [[3.0, 0.0], [-2.0, 1.0]];
const PUBLISHED: [(f64, [[f64; 2]; 2]); 2] = [
    (0.3, [[2.2273, 0.97380], [0.97380, 1.7726]]),
    (0.7, [[1.37162, -0.77790], [-0.77790, 2.62838]]),
];

#[derive(Clone, Debug)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ExampleEntry {
    pub lambda: f64,
    pub limit: CMatrix,
    pub expected: CMatrix,
    pub max_abs_deviation: f64,
    pub n_steps: usize,
    /// `‖(L − L*)/2‖₂`.
    pub hermitian_defect: f64,
    /// Distance of the limit's eigenvalues from `{3, 1}`.
    pub spectrum_error: f64,
    pub pass: bool,
}

#[derive(Clone, Debug)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct TriangularReport {
    pub matrix: CMatrix,
    pub atol: f64,
    pub entries: Vec<ExampleEntry>,
    /// `‖R_T(0.3) − R_T(0.7)‖₂`.
    pub dispersion: f64,
    pub pass: bool,
}

/// Limits of `T = [[3, 0], [−2, 1]]` at `λ = 0.3` and `0.7` against the
/// published values.
pub fn triangular_example(settings: &Settings) -> Result<TriangularReport> {
    let t = CMatrix::from_real_rows(&START);
    let policy = settings.policy_for(&t);
    let mut entries = Vec::new();
    for (lambda, expected) in PUBLISHED {
        let expected = CMatrix::from_real_rows(&expected);
        let lim = limit(&t, lambda, &policy)?;
        let dev = (&lim.matrix - &expected).max_abs();
        let spectrum_error =
            multiset_distance(&eigenvalues(&lim.matrix)?, &[Complex64::new(3.0, 0.0), Complex64::new(1.0, 0.0)]);
        let hermitian_defect = lim.matrix.skew_part().frobenius_norm();
        entries.push(ExampleEntry {
            lambda,
            pass: dev <= EXAMPLE_ATOL && hermitian_defect <= 1e-8 && spectrum_error <= 1e-6,
            n_steps: lim.trace.n_steps,
            limit: lim.matrix,
            expected,
            max_abs_deviation: dev,
            hermitian_defect,
            spectrum_error,
        });
    }
    let dispersion = entries[0].limit.dist(&entries[1].limit);
    Ok(TriangularReport {
        matrix: t,
        atol: EXAMPLE_ATOL,
        pass: entries.iter().all(|e| e.pass),
        entries,
        dispersion,
    })
}
