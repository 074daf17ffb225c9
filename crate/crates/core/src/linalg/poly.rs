use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::CMatrix;

/// Coefficients of `det(xI − T)`, highest degree first (`coeffs[0] == 1`).
///
/// Faddeev–LeVerrier recursion: `M_k = T M_{k-1} + c_{n-k+1} I`,
/// `c_{n-k} = −tr(T M_k)/k`. No eigenvalues are computed.
pub fn char_poly(t: &CMatrix) -> Vec<Complex64> {
    let n = t.dim();
    let mut coeffs = vec![Complex64::new(0.0, 0.0); n + 1];
    coeffs[0] = Complex64::new(1.0, 0.0);
    let mut m = CMatrix::zeros(n);
    for k in 1..=n {
        m = &(t * &m) + &CMatrix::identity(n).scale(coeffs[k - 1]);
        let tm = t * &m;
        coeffs[k] = -tm.trace() / k as f64;
    }
    coeffs
}

/// Monic polynomial with the given roots, highest degree first.
pub fn poly_from_roots(roots: &[Complex64]) -> Vec<Complex64> {
    let mut p = vec![Complex64::new(1.0, 0.0)];
    for &r in roots {
        let mut next = vec![Complex64::new(0.0, 0.0); p.len() + 1];
        for (k, &c) in p.iter().enumerate() {
            next[k] += c;
            next[k + 1] -= c * r;
        }
        p = next;
    }
    p
}
