//! Seeded random matrices: Gaussian matrices, unitaries and well-conditioned
//! similarities for sampling orbits `{S D S⁻¹}`.

use alloc::vec::Vec;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg::{condition_number, inverse, polar_decompose, CMatrix};

/// Default bound on `cond(S)` for orbit samples.
pub const DEFAULT_COND_BOUND: f64 = 20.0;

/// Independent generator for sample `index` of a seeded run. Streams make
/// sample `k` reproducible without generating samples `0..k`.
pub fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Entries `(x + iy)/√2` with `x, y` standard normal.
pub fn gaussian_matrix<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMatrix {
    let s = core::f64::consts::FRAC_1_SQRT_2;
    CMatrix::from_fn(n, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re * s, im * s)
    })
}

/// Unitary polar factor of a Gaussian matrix.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Result<CMatrix> {
    for _ in 0..8 {
        let f = polar_decompose(&gaussian_matrix(rng, n))?;
        if f.rank == n {
            return Ok(f.u);
        }
    }
    Err(Error::ConstructionFailed("random unitary"))
}

/// `S = I + εZ` with `Z` Gaussian and `ε` halved from `1` until
/// `cond(S) ≤ cond_bound`. Returns `(S, S⁻¹)`.
pub fn random_similarity<R: Rng + ?Sized>(rng: &mut R, n: usize, cond_bound: f64) -> Result<(CMatrix, CMatrix)> {
    if !(cond_bound > 1.0) {
        return Err(Error::InvalidInput("conditioning bound must exceed 1"));
    }
    let z = gaussian_matrix(rng, n);
    let mut eps = 1.0;
    for _ in 0..64 {
        let s = &CMatrix::identity(n) + &z.scale_real(eps);
        if condition_number(&s)? <= cond_bound {
            let inv = inverse(&s)?;
            return Ok((s, inv));
        }
        eps *= 0.5;
    }
    Err(Error::ConstructionFailed("similarity within the conditioning bound"))
}

/// `S·diag(d)·S⁻¹` for sample `index` of `seed`.
pub fn orbit_element(seed: u64, index: u64, d: &[Complex64], cond_bound: f64) -> Result<(CMatrix, f64)> {
    let mut rng = sample_rng(seed, index);
    let (s, inv) = random_similarity(&mut rng, d.len(), cond_bound)?;
    let cond = condition_number(&s)?;
    Ok((&(&s * &CMatrix::diag(d)) * &inv, cond))
}

/// Seeded samples from the similarity orbit of `diag(d)` (zeros allowed).
#[derive(Clone, Debug)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct OrbitSample {
    pub seed: u64,
    pub d: Vec<Complex64>,
    pub conditioning_bound: f64,
    pub matrices: Vec<CMatrix>,
    pub conditions: Vec<f64>,
}

pub fn orbit_sample(seed: u64, d: &[Complex64], count: usize, cond_bound: f64) -> Result<OrbitSample> {
    if d.is_empty() {
        return Err(Error::InvalidInput("empty diagonal"));
    }
    let mut matrices = Vec::with_capacity(count);
    let mut conditions = Vec::with_capacity(count);
    for k in 0..count {
        let (t, c) = orbit_element(seed, k as u64, d, cond_bound)?;
        matrices.push(t);
        conditions.push(c);
    }
    Ok(OrbitSample { seed, d: d.to_vec(), conditioning_bound: cond_bound, matrices, conditions })
}

/// `exp(εA)·D·exp(−εA)` with `A` Gaussian normalized to `‖A‖₂ = 1`.
pub fn perturbation<R: Rng + ?Sized>(rng: &mut R, d: &[Complex64], eps: f64) -> Result<CMatrix> {
    let a = gaussian_matrix(rng, d.len());
    let a = a.scale_real(eps / a.frobenius_norm());
    let e = crate::linalg::expm(&a)?;
    let einv = crate::linalg::expm(&-&a)?;
    Ok(&(&e * &CMatrix::diag(d)) * &einv)
}
