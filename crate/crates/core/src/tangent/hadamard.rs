//! Entrywise operators on `T_D O(D)` and their real matrix representations.

use alloc::vec::Vec;

use num_complex::Complex64;

use super::{DiagonalPoint, EQUALITY_TOL};
use crate::error::Result;
use crate::linalg::{singular_values, CMatrix};

/// `(B + B*)/2`.
pub fn p_re(b: &CMatrix) -> CMatrix {
    b.hermitian_part()
}

/// `(B − B*)/2`.
pub fn p_im(b: &CMatrix) -> CMatrix {
    b.skew_part()
}

/// Index pairs `(i, j)` with `d_i ≠ d_j`, row-major. These are the free
/// entries of a tangent vector.
pub fn support(d: &DiagonalPoint) -> Vec<(usize, usize)> {
    let n = d.dim();
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if !d.same_point(i, j) {
                out.push((i, j));
            }
        }
    }
    out
}

/// First divided differences of `f` at the real points `a`:
/// `(f(a_j) − f(a_i))/(a_j − a_i)`, or `f'(a_i)` when `a_i = a_j`.
pub fn divided_differences(a: &[f64], f: impl Fn(f64) -> f64, fprime: impl Fn(f64) -> f64) -> CMatrix {
    CMatrix::from_fn(a.len(), |i, j| {
        let scale = a[i].abs().max(a[j].abs());
        let v = if (a[j] - a[i]).abs() <= EQUALITY_TOL * scale {
            fprime(a[i])
        } else {
            (f(a[j]) - f(a[i])) / (a[j] - a[i])
        };
        Complex64::new(v, 0.0)
    })
}

/// Matrix of a real-linear map on `T_D O(D)` in the orthonormal basis
/// `E_ij, iE_ij` over [`support`] (Frobenius inner product `Re tr(B*A)`).
pub fn operator_matrix(d: &DiagonalPoint, f: impl Fn(&CMatrix) -> CMatrix) -> CMatrix {
    let supp = support(d);
    let m = 2 * supp.len();
    let n = d.dim();
    let mut columns: Vec<Vec<f64>> = Vec::with_capacity(m);
    for &(i, j) in &supp {
        for unit in [Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)] {
            let mut e = CMatrix::zeros(n);
            e[(i, j)] = unit;
            let y = f(&e);
            columns.push(supp.iter().flat_map(|&(p, q)| [y[(p, q)].re, y[(p, q)].im]).collect());
        }
    }
    CMatrix::from_fn(m.max(1), |r, c| if m == 0 { Complex64::new(0.0, 0.0) } else { Complex64::new(columns[c][r], 0.0) })
}

/// Spectral norm of an operator matrix.
pub fn operator_norm(op: &CMatrix) -> Result<f64> {
    Ok(singular_values(op)?[0])
}

/// `‖C_A‖ = max_{d_i ≠ d_j} |A_ij|` on `T_D O(D)`; `0` when the space is trivial.
pub fn hadamard_operator_norm(d: &DiagonalPoint, a: &CMatrix) -> f64 {
    support(d).iter().map(|&(i, j)| a[(i, j)].norm()).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn support_skips_repeated_entries() {
        let d = DiagonalPoint::from_real(&[1.0, 1.0, 2.0]).unwrap();
        assert_eq!(support(&d), [(0, 2), (1, 2), (2, 0), (2, 1)]);
    }

    #[test]
    fn hadamard_norm_matches_operator_matrix() {
        let d = DiagonalPoint::from_real(&[1.0, -2.0, 3.0]).unwrap();
        let a = CMatrix::from_fn(3, |i, j| Complex64::new((i + 2 * j) as f64 - 2.5, 0.5 * i as f64));
        let op = operator_matrix(&d, |x| a.hadamard(x));
        let norm = operator_norm(&op).unwrap();
        assert!((norm - hadamard_operator_norm(&d, &a)).abs() < 1e-13);
    }

    #[test]
    fn divided_difference_of_square() {
        let m = divided_differences(&[1.0, 3.0, 3.0], |t| t * t, |t| 2.0 * t);
        assert_eq!(m[(0, 1)].re, 4.0);
        assert_eq!(m[(1, 2)].re, 6.0);
        assert_eq!(m[(0, 0)].re, 2.0);
    }
}
