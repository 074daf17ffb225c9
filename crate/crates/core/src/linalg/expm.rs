use num_traits::Float;

use super::lu::Lu;
use super::CMatrix;
use crate::error::Result;

const PADE_DEGREE: usize = 8;

/// Matrix exponential by scaling and squaring with a diagonal Padé approximant.
pub fn expm(a: &CMatrix) -> Result<CMatrix> {
    let n = a.dim();
    let norm1 = (0..n)
        .map(|j| (0..n).map(|i| a[(i, j)].norm()).sum::<f64>())
        .fold(0.0, f64::max);
    let mut squarings = 0u32;
    if norm1 > 0.5 {
        squarings = (norm1 / 0.5).log2().ceil() as u32;
    }
    let x = a.scale_real(1.0 / f64::powi(2.0, squarings as i32));

    // c_k = c_{k-1} (q - k + 1) / (k (2q - k + 1))
    let q = PADE_DEGREE;
    let mut c = 1.0;
    let mut power = CMatrix::identity(n);
    let mut num = CMatrix::identity(n);
    let mut den = CMatrix::identity(n);
    for k in 1..=q {
        c *= (q - k + 1) as f64 / (k * (2 * q - k + 1)) as f64;
        power = &power * &x;
        let term = power.scale_real(c);
        num = &num + &term;
        den = if k % 2 == 0 { &den + &term } else { &den - &term };
    }
    let mut e = Lu::new(&den)?.solve(&num);
    for _ in 0..squarings {
        e = &e * &e;
    }
    Ok(e)
}
