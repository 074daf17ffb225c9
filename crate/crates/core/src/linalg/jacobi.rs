//! Jacobi methods: cyclic two-sided Jacobi for Hermitian eigenproblems and
//! one-sided (Hestenes) Jacobi for the SVD. Both are slow for large matrices
//! but accurate and deterministic, which is what the iteration needs.

use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::Float;

use super::CMatrix;
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 100;

/// Unitary 2×2 `G = [[c, s], [-s·e, c·e]]` (with `e = e^{-iφ}`) that
/// diagonalizes `[[a, g], [conj(g), b]]` by `G* H G`.
#[derive(Clone, Copy, Debug)]
struct Rot {
    g00: Complex64,
    g01: Complex64,
    g10: Complex64,
    g11: Complex64,
}

fn hermitian_rotation(a: f64, b: f64, g: Complex64) -> Rot {
    let mag = g.norm();
    let phase = g / mag;
    let theta = (b - a) / (2.0 * mag);
    let t = if theta >= 0.0 {
        1.0 / (theta + (theta * theta + 1.0).sqrt())
    } else {
        -1.0 / (-theta + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    let e = phase.conj();
    Rot {
        g00: Complex64::new(c, 0.0),
        g01: Complex64::new(s, 0.0),
        g10: e * (-s),
        g11: e * c,
    }
}

/// Eigen-decomposition of a Hermitian matrix: ascending real eigenvalues and a
/// unitary matrix whose columns are the eigenvectors.
pub fn hermitian_eig(a: &CMatrix) -> Result<(Vec<f64>, CMatrix)> {
    let n = a.dim();
    let scale = a.frobenius_norm();
    let skew = a.skew_part().frobenius_norm();
    if skew > 1e-10 * scale {
        return Err(Error::NotHermitian(skew / scale));
    }
    let mut m = a.hermitian_part();
    let mut v = CMatrix::identity(n);
    if scale == 0.0 {
        return Ok((alloc::vec![0.0; n], v));
    }

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| m[(i, j)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= f64::EPSILON * 1e-2 * scale {
            converged = true;
            break;
        }
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let g = m[(p, q)];
                let app = m[(p, p)].re;
                let aqq = m[(q, q)].re;
                if g.norm() <= 1e-3 * f64::EPSILON * (app.abs() * aqq.abs()).sqrt()
                    || g.norm() == 0.0
                {
                    m[(p, q)] = Complex64::new(0.0, 0.0);
                    m[(q, p)] = Complex64::new(0.0, 0.0);
                    continue;
                }
                rotated = true;
                let r = hermitian_rotation(app, aqq, g);
                // m <- m G (columns p, q)
                for k in 0..n {
                    let mp = m[(k, p)];
                    let mq = m[(k, q)];
                    m[(k, p)] = mp * r.g00 + mq * r.g10;
                    m[(k, q)] = mp * r.g01 + mq * r.g11;
                }
                // m <- G* m (rows p, q)
                for k in 0..n {
                    let mp = m[(p, k)];
                    let mq = m[(q, k)];
                    m[(p, k)] = r.g00.conj() * mp + r.g10.conj() * mq;
                    m[(q, k)] = r.g01.conj() * mp + r.g11.conj() * mq;
                }
                m[(p, q)] = Complex64::new(0.0, 0.0);
                m[(q, p)] = Complex64::new(0.0, 0.0);
                m[(p, p)] = Complex64::new(m[(p, p)].re, 0.0);
                m[(q, q)] = Complex64::new(m[(q, q)].re, 0.0);
                for k in 0..n {
                    let vp = v[(k, p)];
                    let vq = v[(k, q)];
                    v[(k, p)] = vp * r.g00 + vq * r.g10;
                    v[(k, q)] = vp * r.g01 + vq * r.g11;
                }
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NoConvergence("Hermitian Jacobi eigensolver"));
    }

    let mut order: Vec<usize> = (0..n).collect();
    // stable sort keeps the original index order inside ties
    order.sort_by(|&i, &j| m[(i, i)].re.total_cmp(&m[(j, j)].re));
    let values = order.iter().map(|&i| m[(i, i)].re).collect();
    Ok((values, v.permute_columns(&order)))
}

/// Thin singular value decomposition `T = G V*` with `G = W Σ`.
///
/// `sigma` is sorted descending; `w` holds the normalized left vectors for the
/// columns with `sigma > 0` and zero columns elsewhere. `g` keeps the
/// unnormalized products `T V` so callers can avoid dividing by tiny values.
#[derive(Clone, Debug)]
pub struct Svd {
    pub sigma: Vec<f64>,
    pub v: CMatrix,
    pub w: CMatrix,
    pub g: CMatrix,
}

impl Svd {
    /// Numerical rank with threshold `dim·ε·σ_max`.
    pub fn rank(&self) -> usize {
        let thr = self.rank_threshold();
        self.sigma.iter().filter(|&&s| s > thr).count()
    }

    pub fn rank_threshold(&self) -> f64 {
        let smax = self.sigma.first().copied().unwrap_or(0.0);
        self.sigma.len() as f64 * f64::EPSILON * smax
    }
}

/// One-sided Jacobi SVD.
pub fn svd(t: &CMatrix) -> Result<Svd> {
    let n = t.dim();
    let mut g = t.clone();
    let mut v = CMatrix::identity(n);
    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let mut alpha = 0.0;
                let mut beta = 0.0;
                let mut gamma = Complex64::new(0.0, 0.0);
                for k in 0..n {
                    let gp = g[(k, p)];
                    let gq = g[(k, q)];
                    alpha += gp.norm_sqr();
                    beta += gq.norm_sqr();
                    gamma += gp.conj() * gq;
                }
                if gamma.norm() <= f64::EPSILON * (alpha * beta).sqrt() || gamma.norm() == 0.0 {
                    continue;
                }
                rotated = true;
                let r = hermitian_rotation(alpha, beta, gamma);
                for k in 0..n {
                    let gp = g[(k, p)];
                    let gq = g[(k, q)];
                    g[(k, p)] = gp * r.g00 + gq * r.g10;
                    g[(k, q)] = gp * r.g01 + gq * r.g11;
                    let vp = v[(k, p)];
                    let vq = v[(k, q)];
                    v[(k, p)] = vp * r.g00 + vq * r.g10;
                    v[(k, q)] = vp * r.g01 + vq * r.g11;
                }
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NoConvergence("one-sided Jacobi SVD"));
    }

    let norms: Vec<f64> = (0..n)
        .map(|j| {
            let col = g.column(j);
            let s = col.iter().fold(0.0_f64, |m, z| m.max(z.norm()));
            if s == 0.0 {
                0.0
            } else {
                s * col.iter().map(|z| (z / s).norm_sqr()).sum::<f64>().sqrt()
            }
        })
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]));
    let sigma: Vec<f64> = order.iter().map(|&i| norms[i]).collect();
    let v = v.permute_columns(&order);
    let g = g.permute_columns(&order);
    let w = CMatrix::from_fn(n, |i, j| {
        if sigma[j] > 0.0 {
            g[(i, j)] / sigma[j]
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    Ok(Svd { sigma, v, w, g })
}

/// Singular values in descending order.
pub fn singular_values(t: &CMatrix) -> Result<Vec<f64>> {
    Ok(svd(t)?.sigma)
}
