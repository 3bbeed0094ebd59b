//! LU factorization with partial pivoting for dense complex matrices.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::Zero;

use crate::error::Error;
use crate::mat::{CVector, ComplexMatrix};
use crate::Result;

/// Packed LU factors of a square matrix with a row permutation.
pub struct LuFactors {
    lu: ComplexMatrix,
    perm: Vec<usize>,
}

impl LuFactors {
    /// Factor `a`. Fails on an exactly zero pivot column.
    pub fn new(a: &ComplexMatrix) -> Result<Self> {
        let n = a.require_square()?;
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            // partial pivot
            let mut piv = k;
            let mut best = lu[(k, k)].norm();
            for i in k + 1..n {
                let v = lu[(i, k)].norm();
                if v > best {
                    best = v;
                    piv = i;
                }
            }
            if best == 0.0 {
                return Err(Error::Singular(format!("zero pivot at column {k}")));
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
                if f.is_zero() {
                    continue;
                }
                for j in k + 1..n {
                    let upd = f * lu[(k, j)];
                    lu[(i, j)] -= upd;
                }
            }
        }
        Ok(LuFactors { lu, perm })
    }

    /// Solve `A x = b`.
    pub fn solve(&self, b: &[Complex64]) -> CVector {
        let n = self.lu.rows();
        debug_assert_eq!(b.len(), n);
        let mut x: CVector = self.perm.iter().map(|&p| b[p]).collect();
        // forward
        for i in 1..n {
            for j in 0..i {
                let upd = self.lu[(i, j)] * x[j];
                x[i] -= upd;
            }
        }
        // backward
        for i in (0..n).rev() {
            let mut acc = x[i];
            for j in i + 1..n {
                acc -= self.lu[(i, j)] * x[j];
            }
            x[i] = acc / self.lu[(i, i)];
        }
        x
    }

    /// Explicit inverse, column by column.
    pub fn inverse(&self) -> ComplexMatrix {
        let n = self.lu.rows();
        let mut out = ComplexMatrix::zeros(n, n);
        let mut e = vec![Complex64::zero(); n];
        for j in 0..n {
            e[j] = Complex64::new(1.0, 0.0);
            let col = self.solve(&e);
            for i in 0..n {
                out[(i, j)] = col[i];
            }
            e[j] = Complex64::zero();
        }
        out
    }
}

/// Matrix inverse.
pub fn invert(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    Ok(LuFactors::new(a)?.inverse())
}

/// 1-norm condition estimate `|A|_1 * |A^-1|_1`; infinite when the
/// factorization hits an exact zero pivot.
pub fn cond_one(a: &ComplexMatrix) -> f64 {
    match LuFactors::new(a) {
        Ok(f) => {
            let inv = f.inverse();
            let c = a.norm_one() * inv.norm_one();
            if c.is_finite() {
                c
            } else {
                f64::INFINITY
            }
        }
        Err(_) => f64::INFINITY,
    }
}
