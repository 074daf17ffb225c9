#![allow(dead_code)]

use aluthge::experiments::{orbit_element, sample_rng, DEFAULT_COND_BOUND};
use aluthge::linalg::CMatrix;
use aluthge::Complex64;
use rand::Rng;

/// Eigenvalues with moduli in `[0.5, 3)` and arbitrary phases.
pub fn random_spectrum(seed: u64, r: usize) -> Vec<Complex64> {
    let mut rng = sample_rng(seed, u64::MAX);
    (0..r)
        .map(|_| Complex64::from_polar(rng.random_range(0.5..3.0), rng.random_range(0.0..std::f64::consts::TAU)))
        .collect()
}

/// A seeded diagonalizable matrix `S·diag(d)·S⁻¹` with `cond(S) ≤ 20`.
pub fn diagonalizable(seed: u64, r: usize) -> (CMatrix, Vec<Complex64>) {
    let d = random_spectrum(seed, r);
    let (t, _) = orbit_element(seed, 0, &d, DEFAULT_COND_BOUND).unwrap();
    (t, d)
}

pub fn section44() -> CMatrix {
    CMatrix::from_real_rows(&[[3.0, 0.0], [-2.0, 1.0]])
}
