//! Dense complex matrices.
//!
//! [`CMatrix`] wraps a column-major `nalgebra` matrix of `Complex<f64>`.
//! Row-major ordering only shows up at the serialization boundary
//! ([`CMatrix::from_row_major`], [`CMatrix::to_row_major`]).

use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;
pub type CVector = DVector<C64>;

pub const I: C64 = C64::new(0.0, 1.0);

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix(DMatrix<C64>);

impl CMatrix {
    /// Wraps an existing matrix. Panics on an empty shape; finiteness is
    /// checked by the fallible constructors and by every decomposition.
    pub fn from_inner(m: DMatrix<C64>) -> Self {
        assert!(m.nrows() >= 1 && m.ncols() >= 1, "CMatrix must be at least 1x1");
        CMatrix(m)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_inner(DMatrix::zeros(rows, cols))
    }

    pub fn identity(n: usize) -> Self {
        Self::from_inner(DMatrix::identity(n, n))
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl FnMut(usize, usize) -> C64) -> Self {
        Self::from_inner(DMatrix::from_fn(rows, cols, f))
    }

    /// Builds a matrix from row-major entries, rejecting wrong lengths and
    /// non-finite values.
    pub fn from_row_major(rows: usize, cols: usize, entries: &[C64]) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidArgument("matrix must be at least 1x1".into()));
        }
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch { expected: rows * cols, found: entries.len() });
        }
        let m = Self::from_inner(DMatrix::from_row_slice(rows, cols, entries));
        m.ensure_finite()?;
        Ok(m)
    }

    /// Real matrix from row-major rows, handy in tests and examples.
    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let n = rows.len();
        let m = rows[0].len();
        Self::from_fn(n, m, |i, j| c(rows[i][j], 0.0))
    }

    pub fn from_complex_rows(rows: &[&[C64]]) -> Self {
        let n = rows.len();
        let m = rows[0].len();
        Self::from_fn(n, m, |i, j| rows[i][j])
    }

    pub fn from_real_diag(d: &[f64]) -> Self {
        let n = d.len();
        Self::from_fn(n, n, |i, j| if i == j { c(d[i], 0.0) } else { C64::new(0.0, 0.0) })
    }

    pub fn from_diag(d: &[C64]) -> Self {
        let n = d.len();
        Self::from_fn(n, n, |i, j| if i == j { d[i] } else { C64::new(0.0, 0.0) })
    }

    pub fn to_row_major(&self) -> Vec<C64> {
        let mut out = Vec::with_capacity(self.rows() * self.cols());
        for i in 0..self.rows() {
            for j in 0..self.cols() {
                out.push(self.0[(i, j)]);
            }
        }
        out
    }

    #[inline]
    pub fn inner(&self) -> &DMatrix<C64> {
        &self.0
    }

    #[inline]
    pub fn into_inner(self) -> DMatrix<C64> {
        self.0
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.0.nrows()
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.0.ncols()
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.0[(i, j)]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: C64) {
        self.0[(i, j)] = v;
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn ensure_finite(&self) -> Result<()> {
        if self.is_finite() {
            Ok(())
        } else {
            Err(Error::NonFinite)
        }
    }

    pub fn ensure_square(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows())
        } else {
            Err(Error::NotSquare { rows: self.rows(), cols: self.cols() })
        }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        CMatrix(self.0.adjoint())
    }

    pub fn scale(&self, s: C64) -> Self {
        CMatrix(&self.0 * s)
    }

    pub fn scale_re(&self, s: f64) -> Self {
        CMatrix(self.0.map(|z| z * s))
    }

    /// `(M + M*) / 2`.
    pub fn hermitian_part(&self) -> Self {
        CMatrix((&self.0 + self.0.adjoint()) * C64::new(0.5, 0.0))
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0_f64, |m, z| m.max(z.norm()))
    }

    pub fn frobenius(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entrywise deviation from Hermitian symmetry.
    pub fn hermitian_residual(&self) -> f64 {
        let n = self.rows();
        let mut r = 0.0_f64;
        for i in 0..n {
            for j in 0..self.cols() {
                r = r.max((self.0[(i, j)] - self.0[(j, i)].conj()).norm());
            }
        }
        r
    }

    pub fn block(&self, r0: usize, c0: usize, nr: usize, nc: usize) -> Self {
        Self::from_inner(self.0.view((r0, c0), (nr, nc)).into_owned())
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &CMatrix) {
        self.0.view_mut((r0, c0), (b.rows(), b.cols())).copy_from(&b.0);
    }

    /// `[[m11, m12], [m21, m22]]`.
    pub fn from_blocks(m11: &CMatrix, m12: &CMatrix, m21: &CMatrix, m22: &CMatrix) -> Self {
        let (r1, c1) = (m11.rows(), m11.cols());
        let mut out = Self::zeros(r1 + m21.rows(), c1 + m12.cols());
        out.set_block(0, 0, m11);
        out.set_block(0, c1, m12);
        out.set_block(r1, 0, m21);
        out.set_block(r1, c1, m22);
        out
    }

    pub fn column(&self, j: usize) -> CVector {
        self.0.column(j).into_owned()
    }

    pub fn mul_vec(&self, x: &CVector) -> CVector {
        &self.0 * x
    }

    /// Integer power by repeated multiplication.
    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::identity(self.rows());
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    pub fn trace(&self) -> C64 {
        self.0.trace()
    }
}

impl Mul for &CMatrix {
    type Output = CMatrix;
    fn mul(self, rhs: &CMatrix) -> CMatrix {
        CMatrix(&self.0 * &rhs.0)
    }
}

impl Add for &CMatrix {
    type Output = CMatrix;
    fn add(self, rhs: &CMatrix) -> CMatrix {
        CMatrix(&self.0 + &rhs.0)
    }
}

impl Sub for &CMatrix {
    type Output = CMatrix;
    fn sub(self, rhs: &CMatrix) -> CMatrix {
        CMatrix(&self.0 - &rhs.0)
    }
}

impl Neg for &CMatrix {
    type Output = CMatrix;
    fn neg(self) -> CMatrix {
        CMatrix(-&self.0)
    }
}

impl Mul for CMatrix {
    type Output = CMatrix;
    fn mul(self, rhs: CMatrix) -> CMatrix {
        CMatrix(self.0 * rhs.0)
    }
}

impl Add for CMatrix {
    type Output = CMatrix;
    fn add(self, rhs: CMatrix) -> CMatrix {
        CMatrix(self.0 + rhs.0)
    }
}

impl Sub for CMatrix {
    type Output = CMatrix;
    fn sub(self, rhs: CMatrix) -> CMatrix {
        CMatrix(self.0 - rhs.0)
    }
}

/// Standard inner product `⟨x, y⟩ = y* x`, linear in `x`.
pub fn inner(x: &CVector, y: &CVector) -> C64 {
    y.dotc(x)
}
