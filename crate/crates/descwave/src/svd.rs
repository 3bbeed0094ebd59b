//! Singular value decomposition by one-sided Jacobi rotations.
//!
//! One-sided Jacobi orthogonalizes the columns of the working matrix; it is
//! slow but computes small singular values with high relative accuracy, which
//! the rank decisions here depend on.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::{Float, Zero};

use crate::error::Error;
use crate::mat::ComplexMatrix;
use crate::Result;

const MAX_SWEEPS: usize = 60;

/// `A = U * diag(s) * V^H` with `k = min(rows, cols)` columns and singular
/// values descending. `V` has orthonormal columns; columns of `U` paired with
/// nonzero singular values are orthonormal, the rest are zero.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: ComplexMatrix,
    pub s: Vec<f64>,
    pub v: ComplexMatrix,
}

pub fn svd(a: &ComplexMatrix) -> Result<Svd> {
    if !a.is_finite() {
        return Err(Error::NonFinite);
    }
    if a.rows() < a.cols() {
        let t = svd(&a.adjoint())?;
        return Ok(Svd {
            u: t.v,
            s: t.s,
            v: t.u,
        });
    }
    let (rows, cols) = (a.rows(), a.cols());
    let mut w = a.clone();
    let mut v = ComplexMatrix::identity(cols);
    let eps = f64::EPSILON;

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..cols {
            for q in p + 1..cols {
                let mut app = 0.0_f64;
                let mut aqq = 0.0_f64;
                let mut apq = Complex64::zero();
                for i in 0..rows {
                    let x = w[(i, p)];
                    let y = w[(i, q)];
                    app += x.norm_sqr();
                    aqq += y.norm_sqr();
                    apq += x.conj() * y;
                }
                let habs = apq.norm();
                if habs <= eps * Float::sqrt(app * aqq) + f64::MIN_POSITIVE {
                    continue;
                }
                rotated = true;
                let phase = apq / habs;
                // annihilate the off-diagonal Gram entry
                let tau = (app - aqq) / (2.0 * habs);
                let t = {
                    // smaller-magnitude root of t^2 - 2 tau t - 1 = 0
                    let sgn = if tau >= 0.0 { 1.0 } else { -1.0 };
                    -sgn / (tau.abs() + Float::sqrt(1.0 + tau * tau))
                };
                let c = 1.0 / Float::sqrt(1.0 + t * t);
                let s = c * t;
                // columns (p, q) <- (c*p - s*conj(phase)*q, s*phase*p + c*q)
                for i in 0..rows {
                    let x = w[(i, p)];
                    let y = w[(i, q)];
                    w[(i, p)] = c * x - s * phase.conj() * y;
                    w[(i, q)] = s * phase * x + c * y;
                }
                for i in 0..cols {
                    let x = v[(i, p)];
                    let y = v[(i, q)];
                    v[(i, p)] = c * x - s * phase.conj() * y;
                    v[(i, q)] = s * phase * x + c * y;
                }
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NumericalFailure(String::from(
            "one-sided Jacobi SVD did not converge",
        )));
    }

    // singular values are the column norms; normalize U
    let mut order: Vec<usize> = (0..cols).collect();
    let norms: Vec<f64> = (0..cols)
        .map(|j| {
            let mut s = 0.0;
            for i in 0..rows {
                s += w[(i, j)].norm_sqr();
            }
            Float::sqrt(s)
        })
        .collect();
    order.sort_by(|&x, &y| norms[y].partial_cmp(&norms[x]).unwrap());

    let mut u = ComplexMatrix::zeros(rows, cols);
    let mut vv = ComplexMatrix::zeros(cols, cols);
    let mut s = vec![0.0; cols];
    for (dst, &src) in order.iter().enumerate() {
        s[dst] = norms[src];
        if norms[src] > 0.0 {
            for i in 0..rows {
                u[(i, dst)] = w[(i, src)] / norms[src];
            }
        }
        for i in 0..cols {
            vv[(i, dst)] = v[(i, src)];
        }
    }
    Ok(Svd { u, s, v: vv })
}

impl Svd {
    /// Numerical rank against an absolute cutoff on the singular values.
    pub fn rank(&self, cutoff: f64) -> usize {
        self.s.iter().filter(|&&x| x > cutoff).count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn check_svd(a: &ComplexMatrix, d: &Svd, tol: f64) {
        // reconstruct
        let k = d.s.len();
        let mut sigma = ComplexMatrix::zeros(k, k);
        for i in 0..k {
            sigma[(i, i)] = c(d.s[i], 0.0);
        }
        let recon = d.u.mul(&sigma).mul(&d.v.adjoint());
        assert!(recon.sub(a).norm_one() < tol, "reconstruction");
        let kept = d.s.iter().filter(|&&x| x > 0.0).count();
        let uk = d.u.block(0, d.u.rows(), 0, kept);
        let uhu = uk
            .adjoint()
            .mul(&uk)
            .sub(&ComplexMatrix::identity(kept))
            .norm_one();
        assert!(uhu < tol, "U columns not orthonormal: {uhu}");
        let vhv =
            d.v.adjoint()
                .mul(&d.v)
                .sub(&ComplexMatrix::identity(k))
                .norm_one();
        assert!(vhv < tol, "V columns not orthonormal: {vhv}");
    }

    #[test]
    fn diagonal_matrix() {
        let a = ComplexMatrix::diag(&[c(3.0, 0.0), c(-1.0, 0.0)]);
        let d = svd(&a).unwrap();
        assert!((d.s[0] - 3.0).abs() < 1e-14);
        assert!((d.s[1] - 1.0).abs() < 1e-14);
        check_svd(&a, &d, 1e-13);
    }

    #[test]
    fn rectangular_tall_and_wide() {
        let a = ComplexMatrix::from_rows(&[
            vec![c(1.0, 1.0), c(2.0, 0.0)],
            vec![c(0.0, -1.0), c(1.0, 0.5)],
            vec![c(3.0, 0.0), c(0.0, 2.0)],
        ])
        .unwrap();
        let d = svd(&a).unwrap();
        check_svd(&a, &d, 1e-12);
        let wide = a.adjoint();
        let dw = svd(&wide).unwrap();
        check_svd(&wide, &dw, 1e-12);
        for (x, y) in d.s.iter().zip(&dw.s) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn rank_deficient_detected() {
        // rank-1 outer product
        let a = ComplexMatrix::from_real_rows(&[
            vec![1.0, 2.0, 3.0],
            vec![2.0, 4.0, 6.0],
            vec![-1.0, -2.0, -3.0],
        ])
        .unwrap();
        let d = svd(&a).unwrap();
        assert_eq!(d.rank(1e-10 * d.s[0]), 1);
        check_svd(&a, &d, 1e-12);
    }

    #[test]
    fn zero_matrix() {
        let a = ComplexMatrix::zeros(2, 3);
        let d = svd(&a).unwrap();
        assert!(d.s.iter().all(|&x| x == 0.0));
        assert_eq!(d.rank(0.0), 0);
    }
}
