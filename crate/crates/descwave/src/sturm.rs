//! The discrete Sturm-Liouville eigenproblem with parameterized boundary
//! relations, and eigenfunction expansions of grid data.
//!
//! The three-term recurrence `v(i+1) - (2 - lambda) v(i) + v(i-1) = 0` on the
//! interior nodes, together with the boundary relations
//! `v(0) + alpha N (v(1) - v(0)) = 0` and `v(N) + beta N (v(N) - v(N-1)) = 0`,
//! is equivalent to an (N-1) x (N-1) tridiagonal eigenproblem whose corner
//! diagonal entries carry the boundary parameters.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::Float;

use crate::error::Error;
use crate::mat::{CVector, ComplexMatrix};
use crate::schur::{right_eigenvectors, schur};
use crate::Result;

/// Guard against the excluded denominators `1 - alpha N` and `1 + beta N`.
const DENOM_GUARD: f64 = 1e-12;

/// Problem parameters: `N` spatial subdivisions (grid step `h = 1/N`) and the
/// boundary scalars.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SLProblem {
    pub n: usize,
    pub alpha: f64,
    pub beta: f64,
}

impl SLProblem {
    /// Validates `N >= 3`, `alpha N != 1`, `beta N != -1`.
    pub fn new(n: usize, alpha: f64, beta: f64) -> Result<Self> {
        if n < 3 {
            return Err(Error::Precondition(format!(
                "need N >= 3 subdivisions, got {n}"
            )));
        }
        if !alpha.is_finite() || !beta.is_finite() {
            return Err(Error::NonFinite);
        }
        let nf = n as f64;
        if (1.0 - alpha * nf).abs() <= DENOM_GUARD * (1.0 + (alpha * nf).abs()) {
            return Err(Error::DegenerateBoundary(format!(
                "alpha * N = {} hits 1",
                alpha * nf
            )));
        }
        if (1.0 + beta * nf).abs() <= DENOM_GUARD * (1.0 + (beta * nf).abs()) {
            return Err(Error::DegenerateBoundary(format!(
                "beta * N = {} hits -1",
                beta * nf
            )));
        }
        Ok(SLProblem { n, alpha, beta })
    }
}

/// The `N-1` eigenpairs, eigenvalues ascending. Interior eigenvector values
/// are normalized to unit norm with the first nonzero component positive, and
/// extended to the boundary nodes through the boundary relations.
#[derive(Debug, Clone)]
pub struct SLEigensystem {
    /// Eigenvalues, ascending.
    pub lambdas: Vec<f64>,
    /// Interior eigenfunction values, `vectors[l][i-1] = v_l(i)` for
    /// `1 <= i <= N-1`.
    pub vectors: Vec<Vec<f64>>,
    /// Boundary extensions `v_l(0)`.
    pub v0: Vec<f64>,
    /// Boundary extensions `v_l(N)`.
    pub vn: Vec<f64>,
    /// Largest imaginary part seen in the eigenvalues; the matrix is real
    /// with symmetric off-diagonals, so anything above roundoff is suspect
    /// and worth surfacing to the caller.
    pub max_imag: f64,
}

impl SLEigensystem {
    pub fn modes(&self) -> usize {
        self.lambdas.len()
    }

    /// Eigenfunction values over the full grid `0..=N`.
    pub fn extended(&self, l: usize) -> Vec<f64> {
        let mut v = Vec::with_capacity(self.vectors[l].len() + 2);
        v.push(self.v0[l]);
        v.extend_from_slice(&self.vectors[l]);
        v.push(self.vn[l]);
        v
    }

    pub fn lambda_max_abs(&self) -> f64 {
        self.lambdas.iter().map(|x| x.abs()).fold(0.0, f64::max)
    }
}

/// The `(N-1) x (N-1)` tridiagonal matrix of the eigenproblem: off-diagonals
/// -1, interior diagonal 2, corners `(2 - alpha N)/(1 - alpha N)` and
/// `(2 + beta N)/(1 + beta N)`.
pub fn build_sl_matrix(p: &SLProblem) -> ComplexMatrix {
    let n = p.n;
    let dim = n - 1;
    let nf = n as f64;
    let mut m = ComplexMatrix::zeros(dim, dim);
    for i in 0..dim {
        m[(i, i)] = Complex64::new(2.0, 0.0);
        if i + 1 < dim {
            m[(i, i + 1)] = Complex64::new(-1.0, 0.0);
            m[(i + 1, i)] = Complex64::new(-1.0, 0.0);
        }
    }
    m[(0, 0)] = Complex64::new((2.0 - p.alpha * nf) / (1.0 - p.alpha * nf), 0.0);
    m[(dim - 1, dim - 1)] = Complex64::new((2.0 + p.beta * nf) / (1.0 + p.beta * nf), 0.0);
    m
}

/// Boundary extension factors: `v(0) = c0 * v(1)`, `v(N) = cn * v(N-1)`.
fn extension_factors(p: &SLProblem) -> (f64, f64) {
    let nf = p.n as f64;
    let an = p.alpha * nf;
    let bn = p.beta * nf;
    (an / (an - 1.0), bn / (1.0 + bn))
}

/// Solve the eigenproblem with the general dense eigensolver and normalize
/// per the conventions above.
pub fn solve_sl(p: &SLProblem) -> Result<SLEigensystem> {
    let m = build_sl_matrix(p);
    let dim = p.n - 1;
    let s = schur(&m)?;
    let vecs = right_eigenvectors(&s);
    let eigs = s.eigenvalues();
    let max_imag = eigs.iter().map(|z| z.im.abs()).fold(0.0, f64::max);

    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| eigs[a].re.partial_cmp(&eigs[b].re).unwrap());

    let (c0, cn) = extension_factors(p);
    let mut lambdas = Vec::with_capacity(dim);
    let mut vectors = Vec::with_capacity(dim);
    let mut v0 = Vec::with_capacity(dim);
    let mut vn = Vec::with_capacity(dim);
    for &k in &order {
        lambdas.push(eigs[k].re);
        let col = vecs.col(k);
        let mut v: Vec<f64> = col.iter().map(|z| z.re).collect();
        let norm = Float::sqrt(v.iter().map(|x| x * x).sum::<f64>());
        if norm == 0.0 {
            return Err(Error::NumericalFailure(format!(
                "zero eigenvector for mode {k}"
            )));
        }
        let vmax = v.iter().map(|x| x.abs()).fold(0.0, f64::max);
        let mut sign = 1.0;
        for &x in &v {
            if x.abs() > 1e-8 * vmax {
                sign = if x >= 0.0 { 1.0 } else { -1.0 };
                break;
            }
        }
        for x in &mut v {
            *x *= sign / norm;
        }
        v0.push(c0 * v[0]);
        vn.push(cn * v[dim - 1]);
        vectors.push(v);
    }
    Ok(SLEigensystem {
        lambdas,
        vectors,
        v0,
        vn,
        max_imag,
    })
}

/// Expansion coefficients of interior scalar data `u(1..N-1)` over the
/// eigenbasis: `c_l = sum_i v_l(i) u(i) / sum_i v_l(i)^2`.
pub fn expand(u: &[f64], es: &SLEigensystem) -> Result<Vec<f64>> {
    let dim = es.vectors.first().map_or(0, Vec::len);
    if u.len() != dim {
        return Err(Error::DimensionMismatch(format!(
            "interior grid has {} nodes, expected {dim}",
            u.len()
        )));
    }
    let mut coeffs = Vec::with_capacity(es.modes());
    for v in &es.vectors {
        let num: f64 = v.iter().zip(u).map(|(a, b)| a * b).sum();
        let den: f64 = v.iter().map(|a| a * a).sum();
        if den == 0.0 {
            return Err(Error::NumericalFailure("zero-norm eigenfunction".into()));
        }
        coeffs.push(num / den);
    }
    Ok(coeffs)
}

/// Reconstruct interior data from expansion coefficients.
pub fn reconstruct(coeffs: &[f64], es: &SLEigensystem) -> Vec<f64> {
    let dim = es.vectors.first().map_or(0, Vec::len);
    let mut u = vec![0.0; dim];
    for (c, v) in coeffs.iter().zip(&es.vectors) {
        for (ui, vi) in u.iter_mut().zip(v) {
            *ui += c * vi;
        }
    }
    u
}

/// Componentwise expansion of interior vector data: returns one vector
/// `F_l = sum_i v_l(i) F(i) / sum_i v_l(i)^2` per mode.
pub fn expand_vector(f: &[CVector], es: &SLEigensystem) -> Result<Vec<CVector>> {
    let dim = es.vectors.first().map_or(0, Vec::len);
    if f.len() != dim {
        return Err(Error::DimensionMismatch(format!(
            "interior grid has {} nodes, expected {dim}",
            f.len()
        )));
    }
    let m = f.first().map_or(0, Vec::len);
    let mut out = Vec::with_capacity(es.modes());
    for v in &es.vectors {
        let den: f64 = v.iter().map(|a| a * a).sum();
        if den == 0.0 {
            return Err(Error::NumericalFailure("zero-norm eigenfunction".into()));
        }
        let mut fl = vec![Complex64::new(0.0, 0.0); m];
        for (vi, fi) in v.iter().zip(f) {
            for (acc, x) in fl.iter_mut().zip(fi) {
                *acc += x * vi;
            }
        }
        for x in &mut fl {
            *x /= den;
        }
        out.push(fl);
    }
    Ok(out)
}
