use num_complex::Complex64;
use num_traits::Float;

use super::hadamard::{operator_matrix, operator_norm};
use super::{DiagonalPoint, TangentVector};
use crate::error::{Error, Result};
use crate::linalg::{expm, CMatrix};
use crate::transform::{aluthge, check_lambda};

/// Central-difference step for [`derivative_fd`].
pub const DEFAULT_FD_STEP: f64 = 1e-5;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Every entrywise matrix describing `dΔ_λ` at `D`.
///
/// `H = M_{λ/2} ∘ Nmat ∘ (R − T⁺) + L`, `H1`/`H2` are its Hermitian and
/// anti-Hermitian parts and `G_ij = −H2_ij / (1 − H1_ij)` on `d_i ≠ d_j`.
#[derive(Clone, Debug)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct DerivativeModel {
    pub lambda: f64,
    pub d: DiagonalPoint,
    #[cfg_attr(feature = "serde", serde(rename = "J"))]
    pub j: CMatrix,
    #[cfg_attr(feature = "serde", serde(rename = "K"))]
    pub kmat: CMatrix,
    #[cfg_attr(feature = "serde", serde(rename = "M_half_lambda"))]
    pub m_half_lambda: CMatrix,
    #[cfg_attr(feature = "serde", serde(rename = "R"))]
    pub rmat: CMatrix,
    #[cfg_attr(feature = "serde", serde(rename = "T_plus"))]
    pub tplus: CMatrix,
    #[cfg_attr(feature = "serde", serde(rename = "T_minus"))]
    pub tminus: CMatrix,
    #[cfg_attr(feature = "serde", serde(rename = "N"))]
    pub nmat: CMatrix,
    #[cfg_attr(feature = "serde", serde(rename = "L"))]
    pub lmat: CMatrix,
    #[cfg_attr(feature = "serde", serde(rename = "H"))]
    pub h: CMatrix,
    #[cfg_attr(feature = "serde", serde(rename = "H1"))]
    pub h1: CMatrix,
    #[cfg_attr(feature = "serde", serde(rename = "H2"))]
    pub h2: CMatrix,
    #[cfg_attr(feature = "serde", serde(rename = "G"))]
    pub g: CMatrix,
    pub k: f64,
}

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn k_matrix(d: &DiagonalPoint) -> CMatrix {
    let z = d.entries();
    CMatrix::from_fn(d.dim(), |i, j| {
        if d.same_point(i, j) {
            ZERO
        } else {
            let sgn = if j > i { 1.0 } else { -1.0 };
            real((z[j] - z[i]).norm() * sgn)
        }
    })
}

fn j_matrix(d: &DiagonalPoint, k: &CMatrix) -> CMatrix {
    let z = d.entries();
    CMatrix::from_fn(d.dim(), |i, j| if d.same_point(i, j) { ONE } else { (z[j] - z[i]) / k[(i, j)] })
}

/// `γ'(0) = (R − T⁺) ∘ P_Re(A) + T⁻ ∘ P_Im(A)` for `γ(t) = (e^{tA}De^{−tA})*(e^{tA}De^{−tA})`.
pub fn gamma_prime(d: &DiagonalPoint, a: &CMatrix) -> CMatrix {
    let (r, tp, tm) = curve_matrices(d);
    &(&r - &tp).hadamard(&a.hermitian_part()) + &tm.hadamard(&a.skew_part())
}

fn curve_matrices(d: &DiagonalPoint) -> (CMatrix, CMatrix, CMatrix) {
    let z = d.entries();
    let m = d.moduli();
    let n = d.dim();
    (
        CMatrix::from_fn(n, |i, j| z[i].conj() * z[j] * 2.0),
        CMatrix::from_fn(n, |i, j| real(m[i] * m[i] + m[j] * m[j])),
        CMatrix::from_fn(n, |i, j| real(m[j] * m[j] - m[i] * m[i])),
    )
}

/// `k_{D,λ}`: the max of the modulus-quotient terms over `|d_i| ≠ |d_j|` and
/// of `|λ(e^{i(θ_j−θ_i)} − 1) + 1|` over `θ_i ≠ θ_j`; `0` when both are empty.
pub fn k_constant(d: &DiagonalPoint, lambda: f64) -> Result<f64> {
    check_lambda(lambda)?;
    let m = d.moduli();
    let th = d.phases();
    let mut k: f64 = 0.0;
    for i in 0..d.dim() {
        for j in 0..d.dim() {
            if !d.same_modulus(i, j) {
                let q = (m[j].powf(1.0 - lambda) * m[i].powf(lambda) + m[i].powf(1.0 - lambda) * m[j].powf(lambda))
                    / (m[i] + m[j]);
                k = k.max(q);
            }
            if !d.same_phase(i, j) {
                let e = Complex64::from_polar(1.0, th[j] - th[i]);
                k = k.max(((e - 1.0) * lambda + 1.0).norm());
            }
        }
    }
    Ok(k)
}

pub fn build_model(d: &DiagonalPoint, lambda: f64) -> Result<DerivativeModel> {
    check_lambda(lambda)?;
    let n = d.dim();
    let m = d.moduli();
    let kmat = k_matrix(d);
    let j = j_matrix(d, &kmat);
    let m_half_lambda = CMatrix::from_fn(n, |i, j| {
        if d.same_modulus(i, j) {
            real(0.5 * lambda * m[i].powf(lambda - 2.0))
        } else {
            real((m[j].powf(lambda) - m[i].powf(lambda)) / (m[j] * m[j] - m[i] * m[i]))
        }
    });
    let (rmat, tplus, tminus) = curve_matrices(d);
    let nmat = CMatrix::from_fn(n, |_, j| real(m[j].powf(-lambda)));
    let lmat = CMatrix::from_fn(n, |i, j| real(m[i].powf(lambda) * m[j].powf(-lambda)));
    let h = &m_half_lambda.hadamard(&nmat).hadamard(&(&rmat - &tplus)) + &lmat;
    let h1 = h.hermitian_part();
    let h2 = &h - &h1;
    let g = CMatrix::from_fn(n, |i, jj| if d.same_point(i, jj) { ZERO } else { -h2[(i, jj)] / (ONE - h1[(i, jj)]) });
    Ok(DerivativeModel {
        lambda,
        d: d.clone(),
        j,
        kmat,
        m_half_lambda,
        rmat,
        tplus,
        tminus,
        nmat,
        lmat,
        h,
        h1,
        h2,
        g,
        k: k_constant(d, lambda)?,
    })
}

impl DerivativeModel {
    /// `Q_D x = J ∘ P_Im(J^{∘−1} ∘ x)`, the orthogonal projection onto the
    /// complement of `T_D O_U(D)`. `J` is unimodular, so `J^{∘−1}` needs no
    /// support restriction.
    pub fn q(&self, x: &CMatrix) -> CMatrix {
        let jinv = self.j.map(|z| z.inv());
        self.j.hadamard(&jinv.hadamard(x).skew_part())
    }

    fn apply_raw(&self, x: &CMatrix) -> CMatrix {
        let qx = self.q(x);
        &self.h.hadamard(&qx) + &(x - &qx)
    }

    /// `dΔ_λ(x) = H ∘ Q_D x + (I − Q_D) x`.
    pub fn apply(&self, x: &TangentVector) -> Result<TangentVector> {
        x.check(&self.d)?;
        Ok(TangentVector::project(&self.d, self.apply_raw(x.matrix())))
    }

    fn stable_raw(&self, x: &CMatrix) -> CMatrix {
        let qx = self.q(x);
        let gq = self.g.hadamard(&qx);
        &qx + &(&gq - &self.q(&gq))
    }

    /// `P_{D,λ} x = Q_D x + (I − Q_D)(G ∘ Q_D x)`: the projection onto the stable
    /// subspace along `T_D O_U(D)`.
    pub fn stable_projection(&self, x: &TangentVector) -> Result<TangentVector> {
        x.check(&self.d)?;
        Ok(TangentVector::project(&self.d, self.stable_raw(x.matrix())))
    }

    /// Real operator matrices of `dΔ_λ`, `Q_D` and `P_{D,λ}` on `T_D O(D)`.
    pub fn derivative_operator(&self) -> CMatrix {
        operator_matrix(&self.d, |x| self.apply_raw(x))
    }

    pub fn q_operator(&self) -> CMatrix {
        operator_matrix(&self.d, |x| self.q(x))
    }

    pub fn stable_projection_operator(&self) -> CMatrix {
        operator_matrix(&self.d, |x| self.stable_raw(x))
    }

    /// `‖A_{1D}(λ)‖`, the norm of `Q_D dΔ_λ Q_D`, from the explicit compression.
    pub fn a1_norm(&self) -> Result<f64> {
        operator_norm(&operator_matrix(&self.d, |x| self.q(&self.apply_raw(&self.q(x)))))
    }
}

/// `X = AD − DA`, which also equals `J ∘ K ∘ A`.
pub fn tangent_from_direction(d: &DiagonalPoint, a: &CMatrix) -> Result<TangentVector> {
    if a.dim() != d.dim() {
        return Err(Error::DimensionMismatch(a.dim(), d.dim()));
    }
    let dm = d.matrix();
    Ok(TangentVector::project(d, &(a * &dm) - &(&dm * a)))
}

pub fn q_projection(d: &DiagonalPoint, x: &TangentVector) -> Result<TangentVector> {
    x.check(d)?;
    let kmat = k_matrix(d);
    let j = j_matrix(d, &kmat);
    let jinv = j.map(|z| z.inv());
    Ok(TangentVector::project(d, j.hadamard(&jinv.hadamard(x.matrix()).skew_part())))
}

pub fn derivative_apply(d: &DiagonalPoint, lambda: f64, x: &TangentVector) -> Result<TangentVector> {
    build_model(d, lambda)?.apply(x)
}

/// `G(λ)` on its own.
pub fn stable_projection_block(d: &DiagonalPoint, lambda: f64) -> Result<CMatrix> {
    Ok(build_model(d, lambda)?.g)
}

/// Central difference `[Δ_λ(e^{hA}De^{−hA}) − Δ_λ(e^{−hA}De^{hA})]/(2h)` with
/// `A_ij = x_ij/(d_j − d_i)`, so that `AD − DA = x`. Independent of the
/// entrywise model. Entries off the tangent pattern (which are `O(h²)`) are
/// dropped.
pub fn derivative_fd(d: &DiagonalPoint, lambda: f64, x: &TangentVector, h: f64) -> Result<TangentVector> {
    check_lambda(lambda)?;
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::InvalidInput("finite-difference step must be positive"));
    }
    x.check(d)?;
    let z = d.entries();
    let a = CMatrix::from_fn(d.dim(), |i, j| if d.same_point(i, j) { ZERO } else { x.matrix()[(i, j)] / (z[j] - z[i]) });
    let dm = d.matrix();
    let ep = expm(&a.scale_real(h))?;
    let em = expm(&a.scale_real(-h))?;
    let plus = aluthge(&(&(&ep * &dm) * &em), lambda)?;
    let minus = aluthge(&(&(&em * &dm) * &ep), lambda)?;
    Ok(TangentVector::project(d, (&plus - &minus).scale_real(0.5 / h)))
}
