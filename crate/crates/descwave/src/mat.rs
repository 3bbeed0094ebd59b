//! Dense complex matrices and vectors.
//!
//! Row-major storage over `Complex<f64>`. Everything in the pipeline —
//! coefficients, boundary operators, propagators, projectors — is carried by
//! [`ComplexMatrix`]; solution samples and data grids are [`CVector`]s.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use num_complex::Complex64;
use num_traits::Zero;

use crate::error::Error;
use crate::Result;

/// Complex column vector.
pub type CVector = Vec<Complex64>;

/// Dense complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    /// All-zero `rows x cols` matrix.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ComplexMatrix {
            rows,
            cols,
            data: vec![Complex64::zero(); rows * cols],
        }
    }

    /// Identity matrix of order `n`.
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// Build from nested rows of complex entries.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch(format!(
                "ragged rows while building a {r}x{c} matrix"
            )));
        }
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            data.extend_from_slice(row);
        }
        Ok(ComplexMatrix {
            rows: r,
            cols: c,
            data,
        })
    }

    /// Build from nested rows of real entries.
    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let complex: Vec<Vec<Complex64>> = rows
            .iter()
            .map(|row| row.iter().map(|&x| Complex64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&complex)
    }

    /// Diagonal matrix from the given entries.
    pub fn diag(entries: &[Complex64]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, &e) in entries.iter().enumerate() {
            m[(i, i)] = e;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// True when every entry is finite.
    pub fn is_finite(&self) -> bool {
        self.data
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn require_square(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    /// Plain transpose.
    pub fn transpose(&self) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)];
            }
        }
        out
    }

    pub fn scale(&self, s: Complex64) -> ComplexMatrix {
        let mut out = self.clone();
        for z in &mut out.data {
            *z *= s;
        }
        out
    }

    pub fn add(&self, other: &ComplexMatrix) -> ComplexMatrix {
        debug_assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (z, w) in out.data.iter_mut().zip(&other.data) {
            *z += w;
        }
        out
    }

    pub fn sub(&self, other: &ComplexMatrix) -> ComplexMatrix {
        debug_assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (z, w) in out.data.iter_mut().zip(&other.data) {
            *z -= w;
        }
        out
    }

    /// Matrix product `self * other`.
    pub fn mul(&self, other: &ComplexMatrix) -> ComplexMatrix {
        debug_assert_eq!(self.cols, other.rows, "matmul dimension mismatch");
        let mut out = ComplexMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    /// Matrix-vector product.
    pub fn mul_vec(&self, v: &[Complex64]) -> CVector {
        debug_assert_eq!(self.cols, v.len(), "matvec dimension mismatch");
        let mut out = vec![Complex64::zero(); self.rows];
        for i in 0..self.rows {
            let mut acc = Complex64::zero();
            for j in 0..self.cols {
                acc += self[(i, j)] * v[j];
            }
            out[i] = acc;
        }
        out
    }

    /// 1-norm: maximum absolute column sum (the norm induced by the vector
    /// 1-norm).
    pub fn norm_one(&self) -> f64 {
        let mut best = 0.0_f64;
        for j in 0..self.cols {
            let mut s = 0.0;
            for i in 0..self.rows {
                s += self[(i, j)].norm();
            }
            best = best.max(s);
        }
        best
    }

    /// Largest entry magnitude.
    pub fn norm_max(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Frobenius norm.
    pub fn norm_fro(&self) -> f64 {
        num_traits::Float::sqrt(self.data.iter().map(|z| z.norm_sqr()).sum::<f64>())
    }

    /// Copy of the rectangular block with rows `r0..r1`, cols `c0..c1`.
    pub fn block(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(r1 - r0, c1 - c0);
        for i in r0..r1 {
            for j in c0..c1 {
                out[(i - r0, j - c0)] = self[(i, j)];
            }
        }
        out
    }

    /// Write `block` into this matrix with its top-left corner at `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &ComplexMatrix) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self[(r0 + i, c0 + j)] = block[(i, j)];
            }
        }
    }

    /// Stack `top` above `bottom` (matching column counts).
    pub fn vstack(top: &ComplexMatrix, bottom: &ComplexMatrix) -> ComplexMatrix {
        debug_assert_eq!(top.cols, bottom.cols);
        let mut out = ComplexMatrix::zeros(top.rows + bottom.rows, top.cols);
        out.set_block(0, 0, top);
        out.set_block(top.rows, 0, bottom);
        out
    }

    /// Column `j` as a vector.
    pub fn col(&self, j: usize) -> CVector {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Vector 1-norm, the norm the stability definition uses.
pub fn vec_norm_one(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm()).sum()
}

pub fn vec_add(a: &[Complex64], b: &[Complex64]) -> CVector {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn vec_sub(a: &[Complex64], b: &[Complex64]) -> CVector {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn vec_scale(a: &[Complex64], s: Complex64) -> CVector {
    a.iter().map(|x| x * s).collect()
}

/// `a + s * b`, the workhorse of grid accumulation.
pub fn vec_axpy(a: &mut [Complex64], s: Complex64, b: &[Complex64]) {
    debug_assert_eq!(a.len(), b.len());
    for (x, y) in a.iter_mut().zip(b) {
        *x += s * y;
    }
}

pub fn czero(n: usize) -> CVector {
    vec![Complex64::zero(); n]
}
