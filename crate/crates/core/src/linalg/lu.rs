use alloc::vec::Vec;

use num_complex::Complex64;

use super::CMatrix;
use crate::error::{Error, Result};

/// LU factorization with partial pivoting, `P A = L U` packed in one matrix.
#[derive(Clone, Debug)]
pub struct Lu {
    lu: CMatrix,
    perm: Vec<usize>,
}

impl Lu {
    pub fn new(a: &CMatrix) -> Result<Self> {
        let n = a.dim();
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let scale = a.max_abs();
        for k in 0..n {
            let (piv, pmax) = (k..n)
                .map(|i| (i, lu[(i, k)].norm()))
                .fold((k, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
            if pmax <= f64::EPSILON * scale * n as f64 || pmax == 0.0 {
                return Err(Error::Singular);
            }
            if piv != k {
                perm.swap(piv, k);
                for j in 0..n {
                    let tmp = lu[(k, j)];
                    lu[(k, j)] = lu[(piv, j)];
                    lu[(piv, j)] = tmp;
                }
            }
            let d = lu[(k, k)];
            for i in k + 1..n {
                let f = lu[(i, k)] / d;
                lu[(i, k)] = f;
                for j in k + 1..n {
                    let u = lu[(k, j)];
                    lu[(i, j)] -= f * u;
                }
            }
        }
        Ok(Self { lu, perm })
    }

    pub fn solve_vec(&self, b: &[Complex64]) -> Vec<Complex64> {
        let n = self.lu.dim();
        let mut x: Vec<Complex64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for j in 0..i {
                let l = self.lu[(i, j)];
                x[i] = x[i] - l * x[j];
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                let u = self.lu[(i, j)];
                x[i] = x[i] - u * x[j];
            }
            x[i] /= self.lu[(i, i)];
        }
        x
    }

    /// Solves `A X = B` column by column.
    pub fn solve(&self, b: &CMatrix) -> CMatrix {
        let n = b.dim();
        let mut out = CMatrix::zeros(n);
        for j in 0..n {
            let col = self.solve_vec(&b.column(j));
            out.set_column(j, &col);
        }
        out
    }
}

pub fn inverse(a: &CMatrix) -> Result<CMatrix> {
    Ok(Lu::new(a)?.solve(&CMatrix::identity(a.dim())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_round_trip() {
        let a = CMatrix::from_rows(&[
            [Complex64::new(1.0, 1.0), Complex64::new(2.0, 0.0), Complex64::new(0.0, -1.0)],
            [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0), Complex64::new(3.0, 0.0)],
            [Complex64::new(4.0, 0.0), Complex64::new(0.0, 2.0), Complex64::new(1.0, 0.0)],
        ]);
        let inv = inverse(&a).unwrap();
        assert!((&a * &inv).dist(&CMatrix::identity(3)) < 1e-14);
    }

    #[test]
    fn singular_detected() {
        let a = CMatrix::from_real_rows(&[[1.0, 2.0], [2.0, 4.0]]);
        assert!(matches!(inverse(&a), Err(Error::Singular)));
    }
}
