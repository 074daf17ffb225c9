use alloc::vec::Vec;
use core::f64::consts::TAU;

use num_complex::Complex64;
use num_traits::Float;

use super::jacobi::singular_values;
use super::CMatrix;
use crate::error::{Error, Result};

/// Default relative clustering tolerance for eigenvalues.
pub const DEFAULT_CLUSTER_TOL: f64 = 1e-8;

/// Eigenvalues merged into clusters, with algebraic multiplicities and the
/// polar form `d = |d| e^{iθ}`, `θ ∈ [0, 2π)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    pub eigenvalues: Vec<Complex64>,
    pub multiplicities: Vec<usize>,
    pub moduli: Vec<f64>,
    pub phases: Vec<f64>,
}

impl Spectrum {
    pub fn dim(&self) -> usize {
        self.multiplicities.iter().sum()
    }

    /// Eigenvalues repeated by multiplicity.
    pub fn expanded(&self) -> Vec<Complex64> {
        self.eigenvalues
            .iter()
            .zip(&self.multiplicities)
            .flat_map(|(&z, &m)| core::iter::repeat_n(z, m))
            .collect()
    }
}

pub(crate) fn phase_of(z: Complex64) -> f64 {
    let t = z.arg();
    if t < 0.0 {
        t + TAU
    } else {
        t
    }
}

fn householder_hessenberg(a: &CMatrix) -> CMatrix {
    let n = a.dim();
    let mut h = a.clone();
    for k in 0..n.saturating_sub(2) {
        let x: Vec<Complex64> = (k + 1..n).map(|i| h[(i, k)]).collect();
        let xnorm = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if xnorm == 0.0 {
            continue;
        }
        let phase = if x[0].norm() > 0.0 { x[0] / x[0].norm() } else { Complex64::new(1.0, 0.0) };
        let alpha = -phase * xnorm;
        let mut v = x;
        v[0] -= alpha;
        let vnorm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if vnorm == 0.0 {
            continue;
        }
        for z in v.iter_mut() {
            *z /= vnorm;
        }
        // h <- (I - 2vv*) h
        for j in 0..n {
            let mut dot = Complex64::new(0.0, 0.0);
            for (idx, i) in (k + 1..n).enumerate() {
                dot += v[idx].conj() * h[(i, j)];
            }
            for (idx, i) in (k + 1..n).enumerate() {
                let upd = v[idx] * dot * 2.0;
                h[(i, j)] -= upd;
            }
        }
        // h <- h (I - 2vv*)
        for i in 0..n {
            let mut dot = Complex64::new(0.0, 0.0);
            for (idx, j) in (k + 1..n).enumerate() {
                dot += h[(i, j)] * v[idx];
            }
            for (idx, j) in (k + 1..n).enumerate() {
                let upd = dot * v[idx].conj() * 2.0;
                h[(i, j)] -= upd;
            }
        }
        for i in k + 2..n {
            h[(i, k)] = Complex64::new(0.0, 0.0);
        }
    }
    h
}

fn givens(a: Complex64, b: Complex64) -> (f64, Complex64) {
    if b == Complex64::new(0.0, 0.0) {
        return (1.0, Complex64::new(0.0, 0.0));
    }
    let an = a.norm();
    let bn = b.norm();
    let r = an.hypot(bn);
    if an == 0.0 {
        return (0.0, b.conj() / bn);
    }
    (an / r, (a / an) * b.conj() / r)
}

/// All eigenvalues of a general complex matrix by Hessenberg reduction and
/// single-shift QR iteration.
pub fn eigenvalues(t: &CMatrix) -> Result<Vec<Complex64>> {
    let n = t.dim();
    let mut h = householder_hessenberg(t);
    let mut out = alloc::vec![Complex64::new(0.0, 0.0); n];
    let mut hi = n as isize - 1;
    let mut iters = 0usize;
    let mut total = 0usize;
    while hi >= 0 {
        let hiu = hi as usize;
        if hiu == 0 {
            out[0] = h[(0, 0)];
            break;
        }
        // locate the start of the unreduced block ending at hi
        let mut lo = hiu;
        while lo > 0 {
            let sub = h[(lo, lo - 1)].norm();
            let diag = h[(lo - 1, lo - 1)].norm() + h[(lo, lo)].norm();
            if sub <= f64::EPSILON * diag || sub < f64::MIN_POSITIVE {
                h[(lo, lo - 1)] = Complex64::new(0.0, 0.0);
                break;
            }
            lo -= 1;
        }
        if lo == hiu {
            out[hiu] = h[(hiu, hiu)];
            hi -= 1;
            iters = 0;
            continue;
        }
        iters += 1;
        total += 1;
        if total > 100 * n.max(1) {
            return Err(Error::NoConvergence("Hessenberg QR eigensolver"));
        }
        let a = h[(hiu - 1, hiu - 1)];
        let b = h[(hiu - 1, hiu)];
        let c = h[(hiu, hiu - 1)];
        let d = h[(hiu, hiu)];
        let shift = if iters % 11 == 10 {
            d + Complex64::new(0.75 * c.norm(), 0.5 * c.norm())
        } else {
            let half_tr = (a + d) * 0.5;
            let disc = ((a - d) * 0.5 * ((a - d) * 0.5) + b * c).sqrt();
            let l1 = half_tr + disc;
            let l2 = half_tr - disc;
            if (l1 - d).norm() <= (l2 - d).norm() {
                l1
            } else {
                l2
            }
        };
        for k in lo..=hiu {
            h[(k, k)] -= shift;
        }
        let mut rots = Vec::with_capacity(hiu - lo);
        for k in lo..hiu {
            let (cr, s) = givens(h[(k, k)], h[(k + 1, k)]);
            for j in k..=hiu {
                let x = h[(k, j)];
                let y = h[(k + 1, j)];
                h[(k, j)] = x * cr + s * y;
                h[(k + 1, j)] = -s.conj() * x + y * cr;
            }
            h[(k + 1, k)] = Complex64::new(0.0, 0.0);
            rots.push((cr, s));
        }
        for (idx, k) in (lo..hiu).enumerate() {
            let (cr, s) = rots[idx];
            for i in lo..=(k + 1).min(hiu) {
                let x = h[(i, k)];
                let y = h[(i, k + 1)];
                h[(i, k)] = x * cr + y * s.conj();
                h[(i, k + 1)] = -x * s + y * cr;
            }
        }
        for k in lo..=hiu {
            h[(k, k)] += shift;
        }
    }
    Ok(out)
}

fn scale_of(t: &CMatrix) -> f64 {
    let s = t.frobenius_norm();
    if s > 0.0 {
        s
    } else {
        1.0
    }
}

/// Eigenvalues clustered within `tol·‖T‖₂` (single linkage), each cluster
/// represented by its mean.
pub fn spectrum(t: &CMatrix, tol: f64) -> Result<Spectrum> {
    if tol <= 0.0 || !tol.is_finite() {
        return Err(Error::InvalidInput("clustering tolerance must be positive"));
    }
    let mut ev = eigenvalues(t)?;
    ev.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    let abs_tol = tol * scale_of(t);
    let n = ev.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut i: usize) -> usize {
        while p[i] != i {
            p[i] = p[p[i]];
            i = p[i];
        }
        i
    }
    for i in 0..n {
        for j in i + 1..n {
            if (ev[i] - ev[j]).norm() <= abs_tol {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri.max(rj)] = ri.min(rj);
                }
            }
        }
    }
    let mut roots: Vec<usize> = Vec::new();
    let mut sums: Vec<(Complex64, usize)> = Vec::new();
    for i in 0..n {
        let r = find(&mut parent, i);
        match roots.iter().position(|&x| x == r) {
            Some(k) => {
                sums[k].0 += ev[i];
                sums[k].1 += 1;
            }
            None => {
                roots.push(r);
                sums.push((ev[i], 1));
            }
        }
    }
    let eigenvalues: Vec<Complex64> = sums.iter().map(|(s, m)| s / *m as f64).collect();
    Ok(Spectrum {
        moduli: eigenvalues.iter().map(|z| z.norm()).collect(),
        phases: eigenvalues.iter().map(|&z| phase_of(z)).collect(),
        multiplicities: sums.iter().map(|&(_, m)| m).collect(),
        eigenvalues,
    })
}

/// Numerical dimension of `ker(T − μI)` at threshold `tol·‖T‖₂`.
pub fn geometric_multiplicity(t: &CMatrix, mu: Complex64, tol: f64) -> Result<usize> {
    let shifted = t - &CMatrix::identity(t.dim()).scale(mu);
    let thr = tol * scale_of(t);
    Ok(singular_values(&shifted)?.iter().filter(|&&s| s <= thr).count())
}

/// True when every clustered eigenvalue has equal geometric and algebraic
/// multiplicity.
pub fn is_diagonalizable(t: &CMatrix, tol: f64) -> Result<bool> {
    let spec = spectrum(t, tol)?;
    for (&mu, &m) in spec.eigenvalues.iter().zip(&spec.multiplicities) {
        if m > 1 && geometric_multiplicity(t, mu, tol)? != m {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Smallest possible max-distance between two eigenvalue multisets under a
/// matching (exhaustive for small sizes, greedy beyond 8).
pub fn multiset_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let n = a.len();
    if n <= 8 {
        let mut perm: Vec<usize> = (0..n).collect();
        let mut best = f64::INFINITY;
        permute(&mut perm, 0, &mut |p| {
            let d = p.iter().enumerate().map(|(i, &j)| (a[i] - b[j]).norm()).fold(0.0, f64::max);
            if d < best {
                best = d;
            }
        });
        best
    } else {
        let mut used = alloc::vec![false; n];
        let mut worst: f64 = 0.0;
        for &x in a {
            let (k, d) = (0..n)
                .filter(|&k| !used[k])
                .map(|k| (k, (x - b[k]).norm()))
                .fold((usize::MAX, f64::INFINITY), |acc, y| if y.1 < acc.1 { y } else { acc });
            used[k] = true;
            worst = worst.max(d);
        }
        worst
    }
}

fn permute(p: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
    if k == p.len() {
        f(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permute(p, k + 1, f);
        p.swap(k, i);
    }
}
