use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::Float;

use super::jacobi::{hermitian_eig, svd, Svd};
use super::CMatrix;
use crate::error::{Error, Result};

/// Left polar decomposition `T = u·p` with `p = |T| = (T*T)^{1/2}`.
///
/// `u` is the canonical partial isometry `T·|T|⁺`: it vanishes on `ker p` and
/// is unitary when `T` is invertible.
#[derive(Clone, Debug)]
pub struct PolarFactors {
    pub u: CMatrix,
    pub p: CMatrix,
    pub rank: usize,
}

/// Builds `V·diag(f(σ))·V*`.
pub(crate) fn spectral_function(v: &CMatrix, values: &[f64], f: impl Fn(f64) -> f64) -> CMatrix {
    let n = v.dim();
    let fv: Vec<f64> = values.iter().map(|&x| f(x)).collect();
    CMatrix::from_fn(n, |i, j| {
        let mut acc = Complex64::new(0.0, 0.0);
        for k in 0..n {
            if fv[k] != 0.0 {
                acc += v[(i, k)] * v[(j, k)].conj() * fv[k];
            }
        }
        acc
    })
}

pub fn polar_decompose(t: &CMatrix) -> Result<PolarFactors> {
    if !t.is_finite() {
        let k = t.as_slice().iter().position(|z| !z.is_finite()).unwrap_or(0);
        return Err(Error::NonFinite(k / t.dim(), k % t.dim()));
    }
    let s = svd(t)?;
    Ok(polar_from_svd(&s))
}

pub(crate) fn polar_from_svd(s: &Svd) -> PolarFactors {
    let n = s.v.dim();
    let rank = s.rank();
    let p = spectral_function(&s.v, &s.sigma, |x| x);
    // u = Σ_{σ_k > thr} w_k v_k*
    let u = CMatrix::from_fn(n, |i, j| {
        let mut acc = Complex64::new(0.0, 0.0);
        for k in 0..rank {
            acc += s.w[(i, k)] * s.v[(j, k)].conj();
        }
        acc
    });
    PolarFactors { u, p, rank }
}

/// `p^alpha` for a positive semidefinite `p`.
///
/// Eigenvalues at or below `dim·ε·λ_max` count as zero: `0^α = 0` for
/// `α > 0` and `p^0` is the projection onto the range of `p`. Small negative
/// eigenvalues from rounding are clamped.
pub fn psd_power(p: &CMatrix, alpha: f64) -> Result<CMatrix> {
    let (values, v) = hermitian_eig(p)?;
    let lmax = values.iter().fold(0.0_f64, |m, &x| m.max(x.abs()));
    let thr = p.dim() as f64 * f64::EPSILON * lmax;
    if let Some(&neg) = values.iter().find(|&&x| x < -1e-10 * lmax.max(f64::MIN_POSITIVE)) {
        return Err(Error::NotPositiveSemidefinite(neg));
    }
    let singular = values.iter().any(|&x| x <= thr);
    if singular && alpha < 0.0 {
        return Err(Error::SingularNegativePower);
    }
    Ok(spectral_function(&v, &values, |x| {
        if x <= thr {
            0.0
        } else if alpha == 0.0 {
            1.0
        } else if alpha == 1.0 {
            x
        } else {
            x.powf(alpha)
        }
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn check_invariants(t: &CMatrix, f: &PolarFactors) {
        let nt = t.frobenius_norm();
        assert!((&f.u * &f.p).dist(t) <= 1e-12 * nt.max(1.0));
        assert!(f.p.is_hermitian(1e-13 * nt.max(1.0)));
        let (vals, _) = hermitian_eig(&f.p).unwrap();
        assert!(vals[0] >= -1e-12 * nt);
        // u*u is the projection onto range(p)
        let proj = psd_power(&f.p, 0.0).unwrap();
        assert!((&f.u.adjoint() * &f.u).dist(&proj) < 1e-12);
    }

    #[test]
    fn polar_of_unitary() {
        let u = CMatrix::from_rows(&[[c(0.0, 1.0), c(0.0, 0.0)], [c(0.0, 0.0), c(0.6, 0.8)]]);
        let f = polar_decompose(&u).unwrap();
        assert!(f.u.dist(&u) < 1e-15);
        assert!(f.p.dist(&CMatrix::identity(2)) < 1e-15);
        assert_eq!(f.rank, 2);
    }

    #[test]
    fn polar_of_positive_diagonal() {
        let d = CMatrix::diag_real(&[3.0, 1.0]);
        let f = polar_decompose(&d).unwrap();
        assert!(f.u.dist(&CMatrix::identity(2)) < 1e-15);
        assert!(f.p.dist(&d) < 1e-15);
    }

    #[test]
    fn polar_of_lower_triangular() {
        let t = CMatrix::from_real_rows(&[[3.0, 0.0], [-2.0, 1.0]]);
        let f = polar_decompose(&t).unwrap();
        check_invariants(&t, &f);
        let p2 = &f.p * &f.p;
        assert!(p2.dist(&CMatrix::from_real_rows(&[[13.0, -2.0], [-2.0, 1.0]])) < 1e-13);
        assert!((&f.u.adjoint() * &f.u).dist(&CMatrix::identity(2)) < 1e-14);
    }

    #[test]
    fn polar_of_singular() {
        let j = CMatrix::from_real_rows(&[[0.0, 1.0], [0.0, 0.0]]);
        let f = polar_decompose(&j).unwrap();
        assert_eq!(f.rank, 1);
        assert!(f.p.dist(&CMatrix::diag_real(&[0.0, 1.0])) < 1e-15);
        assert!(f.u.dist(&j) < 1e-15);
        check_invariants(&j, &f);
        let z = polar_decompose(&CMatrix::zeros(3)).unwrap();
        assert_eq!(z.rank, 0);
        assert_eq!(z.u, CMatrix::zeros(3));
    }

    #[test]
    fn powers() {
        let p = CMatrix::diag_real(&[4.0, 9.0]);
        assert!(psd_power(&p, 0.5).unwrap().dist(&CMatrix::diag_real(&[2.0, 3.0])) < 1e-15);
        for a in [-1.3, 0.0, 0.25, 2.0] {
            assert!(psd_power(&CMatrix::identity(3), a).unwrap().dist(&CMatrix::identity(3)) < 1e-15);
        }
        let s = CMatrix::diag_real(&[4.0, 0.0]);
        assert!(psd_power(&s, 0.5).unwrap().dist(&CMatrix::diag_real(&[2.0, 0.0])) < 1e-15);
        assert!(psd_power(&s, 0.0).unwrap().dist(&CMatrix::diag_real(&[1.0, 0.0])) < 1e-15);
        assert!(matches!(psd_power(&s, -0.5), Err(Error::SingularNegativePower)));
        assert!(psd_power(&s, 1.0).unwrap().dist(&s) < 1e-15);
    }

    #[test]
    fn power_rejects_indefinite() {
        let a = CMatrix::diag_real(&[1.0, -1.0]);
        assert!(matches!(psd_power(&a, 0.5), Err(Error::NotPositiveSemidefinite(_))));
    }
}
