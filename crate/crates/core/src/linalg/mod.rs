//! Dense complex matrix kernel sized for small `r×r` problems.
//!
//! Everything is computed with Jacobi-type methods (Hermitian eigenproblem,
//! one-sided SVD) plus a Hessenberg QR for general eigenvalues. Norms are
//! Frobenius norms throughout.

mod expm;
mod jacobi;
mod lu;
mod matrix;
mod polar;
mod poly;
mod spectrum;

pub use expm::expm;
pub use jacobi::{hermitian_eig, singular_values, svd, Svd};
pub use lu::{inverse, Lu};
pub use matrix::{frobenius_inner, frobenius_norm, normality_defect, CMatrix};
pub use polar::{polar_decompose, psd_power, PolarFactors};
pub use poly::{char_poly, poly_from_roots};
pub use spectrum::{
    eigenvalues, geometric_multiplicity, is_diagonalizable, multiset_distance, spectrum, Spectrum,
    DEFAULT_CLUSTER_TOL,
};

pub(crate) use spectrum::phase_of;

/// Condition number `σ_max/σ_min` (infinite when singular).
pub fn condition_number(a: &CMatrix) -> crate::Result<f64> {
    let s = singular_values(a)?;
    let (max, min) = (s[0], s[s.len() - 1]);
    Ok(if min == 0.0 { f64::INFINITY } else { max / min })
}

/// Relative agreement of characteristic polynomials: `|Δc_k| ≤ tol·max(1, s^k)`
/// where `s` is the Frobenius norm of `a`.
pub fn char_poly_close(a: &CMatrix, b: &CMatrix, tol: f64) -> bool {
    let pa = char_poly(a);
    let pb = char_poly(b);
    let s = a.frobenius_norm();
    pa.len() == pb.len()
        && pa
            .iter()
            .zip(&pb)
            .enumerate()
            .all(|(k, (x, y))| (x - y).norm() <= tol * num_traits::Float::powi(s, k as i32).max(1.0))
}
