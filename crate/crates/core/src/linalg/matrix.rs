use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::Float;

use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Dense square complex matrix stored row-major.
#[derive(Clone, PartialEq)]
pub struct CMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    /// Builds a matrix from row-major entries, rejecting NaN/Inf.
    pub fn new(dim: usize, data: Vec<Complex64>) -> Result<Self> {
        if dim == 0 || data.len() != dim * dim {
            return Err(Error::BadShape(data.len(), dim));
        }
        if let Some(k) = data.iter().position(|z| !z.is_finite()) {
            return Err(Error::NonFinite(k / dim, k % dim));
        }
        Ok(Self { dim, data })
    }

    /// Unchecked constructor for internal results (may hold non-finite values).
    pub(crate) fn from_vec(dim: usize, data: Vec<Complex64>) -> Self {
        debug_assert_eq!(data.len(), dim * dim);
        Self { dim, data }
    }

    pub fn zeros(dim: usize) -> Self {
        Self::from_vec(dim, vec![ZERO; dim * dim])
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, |i, j| if i == j { ONE } else { ZERO })
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        Self::from_vec(dim, data)
    }

    /// Real matrix from rows. Panics on ragged input.
    pub fn from_real_rows<R: AsRef<[f64]>>(rows: &[R]) -> Self {
        let dim = rows.len();
        Self::from_fn(dim, |i, j| {
            let row = rows[i].as_ref();
            assert_eq!(row.len(), dim, "ragged rows");
            Complex64::new(row[j], 0.0)
        })
    }

    pub fn from_rows<R: AsRef<[Complex64]>>(rows: &[R]) -> Self {
        let dim = rows.len();
        Self::from_fn(dim, |i, j| {
            let row = rows[i].as_ref();
            assert_eq!(row.len(), dim, "ragged rows");
            row[j]
        })
    }

    pub fn diag(d: &[Complex64]) -> Self {
        Self::from_fn(d.len(), |i, j| if i == j { d[i] } else { ZERO })
    }

    pub fn diag_real(d: &[f64]) -> Self {
        Self::from_fn(d.len(), |i, j| if i == j { Complex64::new(d[i], 0.0) } else { ZERO })
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn diagonal(&self) -> Vec<Complex64> {
        (0..self.dim).map(|i| self[(i, i)]).collect()
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.dim).map(|i| self[(i, j)]).collect()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.is_finite())
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)])
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self::from_vec(self.dim, self.data.iter().map(|z| z * c).collect())
    }

    pub fn scale_real(&self, c: f64) -> Self {
        Self::from_vec(self.dim, self.data.iter().map(|z| z * c).collect())
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        Self::from_vec(self.dim, self.data.iter().map(|&z| f(z)).collect())
    }

    /// Entrywise (Hadamard) product.
    pub fn hadamard(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        Self::from_vec(
            self.dim,
            self.data.iter().zip(&other.data).map(|(a, b)| a * b).collect(),
        )
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    /// Hermitian part `(A + A*)/2`.
    pub fn hermitian_part(&self) -> Self {
        Self::from_fn(self.dim, |i, j| (self[(i, j)] + self[(j, i)].conj()) * 0.5)
    }

    /// Anti-Hermitian part `(A - A*)/2`.
    pub fn skew_part(&self) -> Self {
        Self::from_fn(self.dim, |i, j| (self[(i, j)] - self[(j, i)].conj()) * 0.5)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    /// Frobenius norm, computed with scaling so it does not overflow.
    pub fn frobenius_norm(&self) -> f64 {
        let scale = self.max_abs();
        if scale == 0.0 || !scale.is_finite() {
            return scale;
        }
        let s: f64 = self.data.iter().map(|z| (z / scale).norm_sqr()).sum();
        scale * s.sqrt()
    }

    /// `Re tr(B* A)`.
    pub fn frobenius_inner(&self, b: &Self) -> Result<f64> {
        if self.dim != b.dim {
            return Err(Error::DimensionMismatch(self.dim, b.dim));
        }
        Ok(self
            .data
            .iter()
            .zip(&b.data)
            .map(|(a, b)| (b.conj() * a).re)
            .sum())
    }

    pub fn dist(&self, other: &Self) -> f64 {
        (self - other).frobenius_norm()
    }

    /// Block-diagonal `self ⊕ other`.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let n = self.dim;
        Self::from_fn(n + other.dim, |i, j| match (i < n, j < n) {
            (true, true) => self[(i, j)],
            (false, false) => other[(i - n, j - n)],
            _ => ZERO,
        })
    }

    /// Principal `k×k` block starting at `(offset, offset)`.
    pub fn principal_block(&self, offset: usize, k: usize) -> Self {
        Self::from_fn(k, |i, j| self[(offset + i, offset + j)])
    }

    /// Conjugation `V A V*`.
    pub fn conjugate_by(&self, v: &Self) -> Self {
        &(v * self) * &v.adjoint()
    }

    /// Columns permuted: column `j` of the result is column `perm[j]` of `self`.
    pub fn permute_columns(&self, perm: &[usize]) -> Self {
        Self::from_fn(self.dim, |i, j| self[(i, perm[j])])
    }

    pub fn set_column(&mut self, j: usize, col: &[Complex64]) {
        for (i, &z) in col.iter().enumerate() {
            self[(i, j)] = z;
        }
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.skew_part().frobenius_norm() <= tol
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.dim + j]
    }
}

impl<'a> Mul<&'a CMatrix> for &'a CMatrix {
    type Output = CMatrix;
    fn mul(self, rhs: &'a CMatrix) -> CMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let n = self.dim;
        let mut out = vec![ZERO; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == ZERO {
                    continue;
                }
                let row = &rhs.data[k * n..(k + 1) * n];
                for (o, b) in out[i * n..(i + 1) * n].iter_mut().zip(row) {
                    *o += a * b;
                }
            }
        }
        CMatrix::from_vec(n, out)
    }
}

impl Mul for CMatrix {
    type Output = CMatrix;
    fn mul(self, rhs: CMatrix) -> CMatrix {
        &self * &rhs
    }
}

impl<'a> Add<&'a CMatrix> for &'a CMatrix {
    type Output = CMatrix;
    fn add(self, rhs: &'a CMatrix) -> CMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        CMatrix::from_vec(self.dim, self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect())
    }
}

impl Add for CMatrix {
    type Output = CMatrix;
    fn add(self, rhs: CMatrix) -> CMatrix {
        &self + &rhs
    }
}

impl<'a> Sub<&'a CMatrix> for &'a CMatrix {
    type Output = CMatrix;
    fn sub(self, rhs: &'a CMatrix) -> CMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        CMatrix::from_vec(self.dim, self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect())
    }
}

impl Sub for CMatrix {
    type Output = CMatrix;
    fn sub(self, rhs: CMatrix) -> CMatrix {
        &self - &rhs
    }
}

impl Neg for &CMatrix {
    type Output = CMatrix;
    fn neg(self) -> CMatrix {
        self.map(|z| -z)
    }
}

impl fmt::Debug for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMatrix({}x{}) [", self.dim, self.dim)?;
        for i in 0..self.dim {
            write!(f, "  ")?;
            for z in self.row(i) {
                write!(f, "{:>10.5}{:+.5}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

#[cfg(feature = "serde")]
impl serde::Serialize for CMatrix {
    /// Nested rows of `[re, im]` pairs.
    fn serialize<S: serde::Serializer>(&self, s: S) -> core::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut rows = s.serialize_seq(Some(self.dim))?;
        for i in 0..self.dim {
            let row: Vec<[f64; 2]> = self.row(i).iter().map(|z| [z.re, z.im]).collect();
            rows.serialize_element(&row)?;
        }
        rows.end()
    }
}

/// `‖t*t − t t*‖₂`; zero exactly for normal matrices in exact arithmetic.
pub fn normality_defect(t: &CMatrix) -> f64 {
    let ta = t.adjoint();
    (&(&ta * t) - &(t * &ta)).frobenius_norm()
}

pub fn frobenius_norm(a: &CMatrix) -> f64 {
    a.frobenius_norm()
}

pub fn frobenius_inner(a: &CMatrix, b: &CMatrix) -> Result<f64> {
    a.frobenius_inner(b)
}
