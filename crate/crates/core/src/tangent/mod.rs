//! First-order dynamics of `Δ_λ` at an invertible diagonal fixed point `D`.
//!
//! The tangent space of the similarity orbit at `D` is
//! `T_D O(D) = {X : X_ij = 0 whenever d_i = d_j}`. On it the derivative of
//! `Δ_λ` is an entrywise (Hadamard) operator composed with the orthogonal
//! projection `Q_D` onto the complement of the unitary-orbit tangent space:
//!
//! ```text
//! dΔ_λ(X) = H(λ) ∘ Q_D X + (I − Q_D) X
//! ```
//!
//! [`DerivativeModel`] holds every entrywise matrix of that description for a
//! fixed `(D, λ)`. Models are built at `D` only; a normal point `N = U D U*`
//! is handled by conjugating with `U`.

mod hadamard;
mod model;

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{phase_of, CMatrix};

pub use hadamard::{
    divided_differences, hadamard_operator_norm, operator_matrix, operator_norm, p_im, p_re, support,
};
pub use model::{
    build_model, derivative_apply, derivative_fd, gamma_prime, k_constant, q_projection,
    stable_projection_block, tangent_from_direction, DerivativeModel, DEFAULT_FD_STEP,
};

/// Relative tolerance for `d_i = d_j`, `|d_i| = |d_j|` and `θ_i = θ_j`.
pub const EQUALITY_TOL: f64 = 1e-10;

/// An invertible diagonal matrix `D = diag(d_1, …, d_r)` with its polar data.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct DiagonalPoint {
    d: Vec<Complex64>,
    moduli: Vec<f64>,
    phases: Vec<f64>,
}

impl DiagonalPoint {
    pub fn new(d: Vec<Complex64>) -> Result<Self> {
        if d.is_empty() {
            return Err(Error::InvalidInput("diagonal point needs at least one entry"));
        }
        if let Some(k) = d.iter().position(|z| !z.is_finite()) {
            return Err(Error::NonFinite(k, k));
        }
        if let Some(k) = d.iter().position(|z| z.norm() == 0.0) {
            return Err(Error::SingularD(k));
        }
        Ok(Self {
            moduli: d.iter().map(|z| z.norm()).collect(),
            phases: d.iter().map(|&z| phase_of(z)).collect(),
            d,
        })
    }

    pub fn from_real(d: &[f64]) -> Result<Self> {
        Self::new(d.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// `d_j = m_j e^{iθ_j}`; the stored phases are reduced to `[0, 2π)`.
    pub fn from_polar(moduli: &[f64], phases: &[f64]) -> Result<Self> {
        if moduli.len() != phases.len() {
            return Err(Error::DimensionMismatch(moduli.len(), phases.len()));
        }
        if let Some(k) = moduli.iter().position(|&m| m < 0.0) {
            return Err(Error::SingularD(k));
        }
        Self::new(moduli.iter().zip(phases).map(|(&m, &t)| Complex64::from_polar(m, t)).collect())
    }

    pub fn dim(&self) -> usize {
        self.d.len()
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.d
    }

    pub fn moduli(&self) -> &[f64] {
        &self.moduli
    }

    pub fn phases(&self) -> &[f64] {
        &self.phases
    }

    pub fn matrix(&self) -> CMatrix {
        CMatrix::diag(&self.d)
    }

    pub fn same_point(&self, i: usize, j: usize) -> bool {
        let scale = self.moduli[i].max(self.moduli[j]);
        (self.d[i] - self.d[j]).norm() <= EQUALITY_TOL * scale
    }

    pub fn same_modulus(&self, i: usize, j: usize) -> bool {
        let scale = self.moduli[i].max(self.moduli[j]);
        (self.moduli[i] - self.moduli[j]).abs() <= EQUALITY_TOL * scale
    }

    pub fn same_phase(&self, i: usize, j: usize) -> bool {
        let a = self.d[i] / self.moduli[i];
        let b = self.d[j] / self.moduli[j];
        (a - b).norm() <= EQUALITY_TOL
    }

    /// True when all entries share one modulus.
    pub fn equal_moduli(&self) -> bool {
        (1..self.dim()).all(|j| self.same_modulus(0, j))
    }
}

/// An element of `T_D O(D)`: a matrix vanishing wherever `d_i = d_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct TangentVector {
    x: CMatrix,
}

impl TangentVector {
    /// Checks the sparsity pattern (entries on `d_i = d_j` must be below
    /// `1e-10·max(1, ‖x‖₂)`) and zeroes those entries.
    pub fn new(d: &DiagonalPoint, x: CMatrix) -> Result<Self> {
        if x.dim() != d.dim() {
            return Err(Error::DimensionMismatch(x.dim(), d.dim()));
        }
        let tol = EQUALITY_TOL * x.frobenius_norm().max(1.0);
        let n = x.dim();
        for i in 0..n {
            for j in 0..n {
                if d.same_point(i, j) && x[(i, j)].norm() > tol {
                    return Err(Error::NotTangent(i, j));
                }
            }
        }
        Ok(Self::project(d, x))
    }

    /// Orthogonal projection of an arbitrary matrix onto `T_D O(D)`.
    pub fn project(d: &DiagonalPoint, x: CMatrix) -> Self {
        let x = CMatrix::from_fn(x.dim(), |i, j| {
            if d.same_point(i, j) {
                Complex64::new(0.0, 0.0)
            } else {
                x[(i, j)]
            }
        });
        Self { x }
    }

    pub fn zero(d: &DiagonalPoint) -> Self {
        Self { x: CMatrix::zeros(d.dim()) }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.x
    }

    pub fn into_matrix(self) -> CMatrix {
        self.x
    }

    pub fn norm(&self) -> f64 {
        self.x.frobenius_norm()
    }

    fn check(&self, d: &DiagonalPoint) -> Result<()> {
        if self.x.dim() != d.dim() {
            return Err(Error::DimensionMismatch(self.x.dim(), d.dim()));
        }
        let n = d.dim();
        let tol = EQUALITY_TOL * self.x.frobenius_norm().max(1.0);
        for i in 0..n {
            for j in 0..n {
                if d.same_point(i, j) && self.x[(i, j)].norm() > tol {
                    return Err(Error::NotTangent(i, j));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::{FRAC_PI_2, PI};

    #[test]
    fn point_construction() {
        assert!(matches!(DiagonalPoint::from_real(&[1.0, 0.0]), Err(Error::SingularD(1))));
        let d = DiagonalPoint::from_polar(&[1.0, 2.0], &[FRAC_PI_2, -FRAC_PI_2]).unwrap();
        assert!((d.phases()[1] - 1.5 * PI).abs() < 1e-15);
        for k in 0..2 {
            let z = Complex64::from_polar(d.moduli()[k], d.phases()[k]);
            assert!((z - d.entries()[k]).norm() <= 1e-14);
        }
        assert!(!d.same_modulus(0, 1));
        let e = DiagonalPoint::from_real(&[1.0, -1.0, 1.0]).unwrap();
        assert!(e.equal_moduli());
        assert!(e.same_point(0, 2) && !e.same_point(0, 1));
        assert!(!e.same_phase(0, 1));
    }

    #[test]
    fn tangent_pattern() {
        let d = DiagonalPoint::from_real(&[1.0, 1.0, 2.0]).unwrap();
        let bad = CMatrix::from_real_rows(&[[0.0, 1.0, 0.0], [0.0, 0.0, 0.0], [0.0, 0.0, 0.0]]);
        assert!(matches!(TangentVector::new(&d, bad.clone()), Err(Error::NotTangent(0, 1))));
        let p = TangentVector::project(&d, bad);
        assert_eq!(*p.matrix(), CMatrix::zeros(3));
        let ok = CMatrix::from_real_rows(&[[0.0, 0.0, 5.0], [0.0, 0.0, 0.0], [1.0, 0.0, 0.0]]);
        assert_eq!(*TangentVector::new(&d, ok.clone()).unwrap().matrix(), ok);
    }
}
