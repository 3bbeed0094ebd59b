//! Complex Schur decomposition by Householder reduction and shifted QR
//! iteration, with eigenvalue reordering and triangular eigenvector
//! extraction.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::{Float, Zero};

use crate::error::Error;
use crate::mat::ComplexMatrix;
use crate::Result;

const MAX_SWEEPS_PER_EIGENVALUE: usize = 80;

/// Unitary similarity `A = Q T Q^H` with `T` upper triangular.
#[derive(Debug, Clone)]
pub struct Schur {
    pub t: ComplexMatrix,
    pub q: ComplexMatrix,
}

impl Schur {
    pub fn eigenvalues(&self) -> Vec<Complex64> {
        let n = self.t.rows();
        (0..n).map(|i| self.t[(i, i)]).collect()
    }
}

/// Complex Givens rotation: returns `(c, s)` with `c` real such that
/// `[c, s; -conj(s), c] * [a; b] = [r; 0]`.
fn givens(a: Complex64, b: Complex64) -> (f64, Complex64) {
    let na = a.norm();
    let nb = b.norm();
    if nb == 0.0 {
        return (1.0, Complex64::zero());
    }
    let norm = Float::hypot(na, nb);
    if na == 0.0 {
        // rotation that just swaps with a phase
        return (0.0, b.conj() / norm);
    }
    let alpha = a / na;
    (na / norm, alpha * b.conj() / norm)
}

/// Apply the rotation to rows `(i, i+1)` over columns `j0..j1`.
fn rot_left(h: &mut ComplexMatrix, i: usize, c: f64, s: Complex64, j0: usize, j1: usize) {
    for j in j0..j1 {
        let x = h[(i, j)];
        let y = h[(i + 1, j)];
        h[(i, j)] = c * x + s * y;
        h[(i + 1, j)] = -s.conj() * x + c * y;
    }
}

/// Apply the adjoint rotation to columns `(i, i+1)` over rows `r0..r1`.
fn rot_right(h: &mut ComplexMatrix, i: usize, c: f64, s: Complex64, r0: usize, r1: usize) {
    for r in r0..r1 {
        let x = h[(r, i)];
        let y = h[(r, i + 1)];
        h[(r, i)] = c * x + s.conj() * y;
        h[(r, i + 1)] = -s * x + c * y;
    }
}

/// Reduce `h` to upper Hessenberg form in place, accumulating the unitary
/// transform into `q` (which must start as the identity).
fn hessenberg(h: &mut ComplexMatrix, q: &mut ComplexMatrix) {
    let n = h.rows();
    if n < 3 {
        return;
    }
    for k in 0..n - 2 {
        // Householder vector for column k below the subdiagonal
        let mut norm_x = 0.0_f64;
        for i in k + 1..n {
            norm_x = Float::hypot(norm_x, h[(i, k)].norm());
        }
        if norm_x == 0.0 {
            continue;
        }
        let x0 = h[(k + 1, k)];
        let phase = if x0.is_zero() {
            Complex64::new(1.0, 0.0)
        } else {
            x0 / x0.norm()
        };
        let alpha = -phase * norm_x;
        let mut v: Vec<Complex64> = (k + 1..n).map(|i| h[(i, k)]).collect();
        v[0] -= alpha;
        let vnorm_sq: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if vnorm_sq == 0.0 {
            continue;
        }
        let beta = 2.0 / vnorm_sq;
        // H <- P H  (rows k+1.., all columns)
        for j in k..n {
            let mut dot = Complex64::zero();
            for (off, vi) in v.iter().enumerate() {
                dot += vi.conj() * h[(k + 1 + off, j)];
            }
            dot *= beta;
            for (off, vi) in v.iter().enumerate() {
                let upd = dot * vi;
                h[(k + 1 + off, j)] -= upd;
            }
        }
        // H <- H P  (all rows, columns k+1..)
        for r in 0..n {
            let mut dot = Complex64::zero();
            for (off, vi) in v.iter().enumerate() {
                dot += h[(r, k + 1 + off)] * vi;
            }
            dot *= beta;
            for (off, vi) in v.iter().enumerate() {
                let upd = dot * vi.conj();
                h[(r, k + 1 + off)] -= upd;
            }
        }
        // Q <- Q P
        for r in 0..n {
            let mut dot = Complex64::zero();
            for (off, vi) in v.iter().enumerate() {
                dot += q[(r, k + 1 + off)] * vi;
            }
            dot *= beta;
            for (off, vi) in v.iter().enumerate() {
                let upd = dot * vi.conj();
                q[(r, k + 1 + off)] -= upd;
            }
        }
        for i in k + 2..n {
            h[(i, k)] = Complex64::zero();
        }
        h[(k + 1, k)] = alpha;
    }
}

/// Wilkinson shift: eigenvalue of the trailing 2x2 block closest to its
/// bottom-right entry.
fn wilkinson_shift(h: &ComplexMatrix, hi: usize) -> Complex64 {
    let a = h[(hi - 1, hi - 1)];
    let b = h[(hi - 1, hi)];
    let c = h[(hi, hi - 1)];
    let d = h[(hi, hi)];
    let tr = a + d;
    let det = a * d - b * c;
    let disc = (tr * tr - 4.0 * det).sqrt();
    let mu1 = (tr + disc) / 2.0;
    let mu2 = (tr - disc) / 2.0;
    if (mu1 - d).norm() <= (mu2 - d).norm() {
        mu1
    } else {
        mu2
    }
}

/// Complex Schur decomposition of a square matrix.
pub fn schur(a: &ComplexMatrix) -> Result<Schur> {
    let n = a.require_square()?;
    if !a.is_finite() {
        return Err(Error::NonFinite);
    }
    let mut t = a.clone();
    let mut q = ComplexMatrix::identity(n);
    if n <= 1 {
        return Ok(Schur { t, q });
    }
    hessenberg(&mut t, &mut q);

    let scale = t.norm_one().max(f64::MIN_POSITIVE);
    let eps = f64::EPSILON;
    let negligible = |t: &ComplexMatrix, i: usize| -> bool {
        let local = t[(i - 1, i - 1)].norm() + t[(i, i)].norm();
        let tol = if local > 0.0 {
            eps * local
        } else {
            eps * scale
        };
        t[(i, i - 1)].norm() <= tol
    };

    let mut hi = n - 1;
    let mut sweeps = 0usize;
    loop {
        // deflate converged eigenvalues at the bottom of the active window
        while hi > 0 && negligible(&t, hi) {
            t[(hi, hi - 1)] = Complex64::zero();
            hi -= 1;
            sweeps = 0;
        }
        if hi == 0 {
            break;
        }
        // start of the unreduced block ending at hi
        let mut lo = hi;
        while lo > 0 && !negligible(&t, lo) {
            lo -= 1;
        }
        if lo > 0 {
            t[(lo, lo - 1)] = Complex64::zero();
        }

        sweeps += 1;
        if sweeps > MAX_SWEEPS_PER_EIGENVALUE {
            return Err(Error::NumericalFailure(String::from(
                "QR iteration did not converge",
            )));
        }
        let mu = if sweeps.is_multiple_of(12) {
            // exceptional shift to break symmetry-induced stalls
            t[(hi, hi)] + Complex64::new(0.75 * t[(hi, hi - 1)].norm(), 0.0)
        } else {
            wilkinson_shift(&t, hi)
        };

        // implicit single-shift sweep over the active block
        let mut x = t[(lo, lo)] - mu;
        let mut y = t[(lo + 1, lo)];
        for i in lo..hi {
            let (c, s) = givens(x, y);
            let left_from = if i > lo { i - 1 } else { lo };
            rot_left(&mut t, i, c, s, left_from, n);
            rot_right(&mut t, i, c, s, 0, (i + 3).min(hi + 1));
            rot_right(&mut q, i, c, s, 0, n);
            if i + 1 < hi {
                x = t[(i + 1, i)];
                y = t[(i + 2, i)];
            }
        }
    }

    // clean the strictly lower triangle
    for i in 0..n {
        for j in 0..i {
            t[(i, j)] = Complex64::zero();
        }
    }
    Ok(Schur { t, q })
}

/// Right eigenvectors of the original matrix, one column per eigenvalue of
/// the Schur factor, each normalized to unit 2-norm.
///
/// Nearly equal diagonal entries are guarded with an `eps`-scaled
/// perturbation, as in standard triangular eigenvector solvers.
pub fn right_eigenvectors(s: &Schur) -> ComplexMatrix {
    let n = s.t.rows();
    let smin = f64::EPSILON * s.t.norm_one().max(1.0);
    let mut out = ComplexMatrix::zeros(n, n);
    let mut y = vec![Complex64::zero(); n];
    for k in 0..n {
        for z in y.iter_mut() {
            *z = Complex64::zero();
        }
        y[k] = Complex64::new(1.0, 0.0);
        let lam = s.t[(k, k)];
        for i in (0..k).rev() {
            let mut num = Complex64::zero();
            for j in i + 1..=k {
                num -= s.t[(i, j)] * y[j];
            }
            let mut den = s.t[(i, i)] - lam;
            if den.norm() < smin {
                den = Complex64::new(smin, 0.0);
            }
            y[i] = num / den;
        }
        // back-transform and normalize
        let mut norm_sq = 0.0_f64;
        for i in 0..n {
            let mut acc = Complex64::zero();
            for j in 0..=k {
                acc += s.q[(i, j)] * y[j];
            }
            out[(i, k)] = acc;
            norm_sq += acc.norm_sqr();
        }
        let norm = Float::sqrt(norm_sq);
        if norm > 0.0 {
            for i in 0..n {
                out[(i, k)] /= norm;
            }
        }
    }
    out
}
