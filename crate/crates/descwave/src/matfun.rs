//! Generalized inverses, the core-nilpotent decomposition, matrix functions
//! and spectra: the linear-algebra kernel the rest of the pipeline consumes.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::Zero;

use crate::error::Error;
use crate::mat::{CVector, ComplexMatrix};
use crate::schur::schur;
use crate::svd::svd;
use crate::Result;

/// Residual bound (relative) accepted for a core-nilpotent reconstruction.
const DECOMP_RESID_TOL: f64 = 1e-8;
/// Residual bound (relative) accepted for a principal square root.
const SQRT_RESID_TOL: f64 = 1e-9;

/// Default relative rank threshold for an order-`n` matrix.
pub fn default_rank_tol(n: usize) -> f64 {
    (n.max(1)) as f64 * 1e-12
}

/// Eigenvalues with multiplicity, sorted lexicographically by real part,
/// then imaginary part.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub eigenvalues: Vec<Complex64>,
}

impl Spectrum {
    pub fn max_modulus(&self) -> f64 {
        self.eigenvalues
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }
}

/// Similarity `A = T * blockdiag(C, N) * T^-1` with `C` invertible (p x p)
/// and `N` nilpotent (q x q) of index `k`.
#[derive(Debug, Clone)]
pub struct CoreNilpotentDecomposition {
    /// Change of basis (not unitary in general, but well conditioned when the
    /// zero and nonzero eigenvalue groups are separated).
    pub t: ComplexMatrix,
    /// Cached inverse of `t`.
    pub t_inv: ComplexMatrix,
    /// Invertible core block, upper triangular.
    pub c: ComplexMatrix,
    /// Nilpotent block, strictly upper triangular.
    pub n: ComplexMatrix,
    pub p: usize,
    pub q: usize,
    /// Index of the matrix: smallest `k` with `N^k = 0` (0 when `q = 0`).
    pub index: usize,
}

impl CoreNilpotentDecomposition {
    /// `T * blockdiag(top, bottom) * T^-1` for blocks conforming to (p, q).
    pub fn assemble(&self, top: &ComplexMatrix, bottom: &ComplexMatrix) -> ComplexMatrix {
        debug_assert_eq!(top.rows(), self.p);
        debug_assert_eq!(bottom.rows(), self.q);
        let m = self.p + self.q;
        let mut mid = ComplexMatrix::zeros(m, m);
        mid.set_block(0, 0, top);
        mid.set_block(self.p, self.p, bottom);
        self.t.mul(&mid).mul(&self.t_inv)
    }

    /// Reconstruct the decomposed matrix.
    pub fn reconstruct(&self) -> ComplexMatrix {
        self.assemble(&self.c, &self.n)
    }

    /// The core projector `T * blockdiag(I_p, 0) * T^-1`.
    pub fn core_projector(&self) -> ComplexMatrix {
        self.assemble(
            &ComplexMatrix::identity(self.p),
            &ComplexMatrix::zeros(self.q, self.q),
        )
    }
}

/// Invert an upper triangular matrix by back substitution.
pub(crate) fn invert_upper_triangular(t: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = t.require_square()?;
    let mut inv = ComplexMatrix::zeros(n, n);
    for j in (0..n).rev() {
        let d = t[(j, j)];
        if d.is_zero() {
            return Err(Error::Singular(format!("triangular diagonal zero at {j}")));
        }
        inv[(j, j)] = Complex64::new(1.0, 0.0) / d;
        for i in (0..j).rev() {
            let mut acc = Complex64::zero();
            for k in i + 1..=j {
                acc += t[(i, k)] * inv[(k, j)];
            }
            inv[(i, j)] = -acc / t[(i, i)];
        }
    }
    Ok(inv)
}

/// Rank profile of the scaled powers: returns `(q, index)` where
/// `q = m - rank(A^k)` and `index` is the first `k` with
/// `rank(A^k) = rank(A^{k+1})`. Rank decisions use the SVD with a relative
/// cutoff, which stays robust even when the computed eigenvalues of a
/// defective zero cluster are smeared over an `eps^(1/k)` disk.
fn power_rank_profile(a: &ComplexMatrix, rank_tol: f64) -> Result<(usize, usize, ComplexMatrix)> {
    let m = a.rows();
    let a_s = a.scale(Complex64::new(1.0 / a.norm_one(), 0.0));
    // one absolute cutoff for the whole power sequence: a cut relative to
    // each power's own largest singular value would count pure roundoff as
    // rank once a power collapses to noise
    let abs_cut = rank_tol * svd(&a_s)?.s.first().copied().unwrap_or(0.0);
    let rank_of = |mat: &ComplexMatrix| -> Result<usize> {
        let d = svd(mat)?;
        Ok(d.rank(abs_cut))
    };
    let mut pow = a_s.clone();
    let mut rank_prev = rank_of(&pow)?;
    if rank_prev == m {
        return Ok((0, 0, pow));
    }
    let mut index = 1;
    for _ in 1..=m {
        let next = pow.mul(&a_s);
        let rank_next = rank_of(&next)?;
        if rank_next == rank_prev {
            break;
        }
        pow = next;
        rank_prev = rank_next;
        index += 1;
    }
    Ok((m - rank_prev, index, pow))
}

/// Upper-triangularize a block by its own Schur decomposition, zeroing the
/// strictly lower part; returns `(triangular, unitary)`.
fn triangularize(block: &ComplexMatrix) -> Result<(ComplexMatrix, ComplexMatrix)> {
    let s = schur(block)?;
    let mut t = s.t;
    for i in 0..t.rows() {
        for j in 0..i {
            t[(i, j)] = Complex64::zero();
        }
    }
    Ok((t, s.q))
}

/// Core-nilpotent decomposition through the invariant subspaces of `A^k`.
///
/// The generalized null space dimension `q` and the index `k` come from the
/// rank profile of the powers (SVD decisions at the `rank_tol` cutoff); the
/// SVD of `A^k` then yields orthonormal bases of `range(A^k)` (the core
/// subspace) and `null(A^k)` (the nilpotent one), both `A`-invariant and
/// both well conditioned. Each diagonal block is finally triangularized by
/// its own unitary Schur factor.
///
/// Grouping by the computed eigenvalues themselves (reorder a full Schur
/// form against `|lambda| <= tol`) is not viable here: a defective zero
/// cluster smears its computed eigenvalues over a disk of radius about
/// `eps^(1/k)`, and any split based on them loses that much accuracy in the
/// Drazin identities. The subspace route never touches those eigenvalues.
pub fn core_nilpotent(a: &ComplexMatrix, rank_tol: f64) -> Result<CoreNilpotentDecomposition> {
    let m = a.require_square()?;
    if !a.is_finite() {
        return Err(Error::NonFinite);
    }
    let scale = a.norm_one();
    if scale == 0.0 {
        // the zero matrix: index 1, empty core
        return Ok(CoreNilpotentDecomposition {
            t: ComplexMatrix::identity(m),
            t_inv: ComplexMatrix::identity(m),
            c: ComplexMatrix::zeros(0, 0),
            n: ComplexMatrix::zeros(m, m),
            p: 0,
            q: m,
            index: 1,
        });
    }
    let (q, index, a_pow) = power_rank_profile(a, rank_tol)?;
    let p = m - q;

    // orthonormal bases: range(A^k) from U, null(A^k) from the tail of V
    let t_raw = if q == 0 {
        ComplexMatrix::identity(m)
    } else {
        let d = svd(&a_pow)?;
        let mut t_raw = ComplexMatrix::zeros(m, m);
        for j in 0..p {
            for i in 0..m {
                t_raw[(i, j)] = d.u[(i, j)];
            }
        }
        for j in 0..q {
            for i in 0..m {
                t_raw[(i, p + j)] = d.v[(i, p + j)];
            }
        }
        t_raw
    };
    let t_raw_inv = crate::lu::invert(&t_raw)
        .map_err(|_| Error::NumericalFailure(String::from("core/nilpotent bases degenerate")))?;

    // both subspaces are A-invariant, so this is block diagonal up to noise
    let b = t_raw_inv.mul(a).mul(&t_raw);
    let c_block = b.block(0, p, 0, p);
    let n_block = b.block(p, m, p, m);

    let (c_tri, qc) = triangularize(&c_block)?;
    let (n_tri, qn) = triangularize(&n_block)?;
    let mut rot = ComplexMatrix::zeros(m, m);
    rot.set_block(0, 0, &qc);
    rot.set_block(p, p, &qn);
    let t = t_raw.mul(&rot);
    let t_inv = rot.adjoint().mul(&t_raw_inv);

    let cn = CoreNilpotentDecomposition {
        t,
        t_inv,
        c: c_tri,
        n: n_tri,
        p,
        q,
        index,
    };
    let resid = cn.reconstruct().sub(a).norm_one();
    if resid > DECOMP_RESID_TOL * scale.max(1.0) {
        return Err(Error::NumericalFailure(format!(
            "core-nilpotent reconstruction residual {resid:.3e} exceeds tolerance"
        )));
    }
    Ok(cn)
}

/// Drazin inverse `A^D = T * blockdiag(C^-1, 0) * T^-1`.
pub fn drazin_inverse(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let cn = core_nilpotent(a, default_rank_tol(a.rows()))?;
    drazin_from_decomposition(&cn)
}

/// Drazin inverse from an existing decomposition.
pub fn drazin_from_decomposition(cn: &CoreNilpotentDecomposition) -> Result<ComplexMatrix> {
    let c_inv = invert_upper_triangular(&cn.c)?;
    Ok(cn.assemble(&c_inv, &ComplexMatrix::zeros(cn.q, cn.q)))
}

/// Group-style inverse for matrices of index at most 1; coincides with the
/// Drazin inverse there and satisfies `A A^G A = A`.
pub fn group_style_inverse(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let cn = core_nilpotent(a, default_rank_tol(a.rows()))?;
    if cn.index > 1 {
        return Err(Error::IndexTooHigh { index: cn.index });
    }
    drazin_from_decomposition(&cn)
}

/// Moore-Penrose pseudoinverse. `rank_tol` is relative: singular values at or
/// below `rank_tol * sigma_max` are treated as zero.
pub fn moore_penrose(a: &ComplexMatrix, rank_tol: f64) -> Result<ComplexMatrix> {
    let d = svd(a)?;
    let cut = rank_tol * d.s.first().copied().unwrap_or(0.0);
    let k = d.s.len();
    let mut sig_pinv = ComplexMatrix::zeros(k, k);
    for i in 0..k {
        if d.s[i] > cut && d.s[i] > 0.0 {
            sig_pinv[(i, i)] = Complex64::new(1.0 / d.s[i], 0.0);
        }
    }
    Ok(d.v.mul(&sig_pinv).mul(&d.u.adjoint()))
}

/// Result of Mitra's solvability test for `A x = b` with an inner inverse.
#[derive(Debug, Clone)]
pub struct MitraSolution {
    /// Whether `A A^G b = b` holds to tolerance.
    pub consistent: bool,
    /// Particular solution `A^G b` (meaningful only when consistent).
    pub particular: CVector,
    /// `I - A^G A`: its range parametrizes the solution family.
    pub null_projector: ComplexMatrix,
    /// Consistency residual `|A A^G b - b|_1`.
    pub residual: f64,
}

/// Mitra's criterion: `A x = b` is solvable iff `A A^G b = b`, and then every
/// solution is `A^G b + (I - A^G A) z`.
///
/// Fails if `ag` is not an inner inverse of `a` (`A A^G A = A`).
pub fn solve_mitra(
    a: &ComplexMatrix,
    ag: &ComplexMatrix,
    b: &[Complex64],
    tol: f64,
) -> Result<MitraSolution> {
    if ag.rows() != a.cols() || ag.cols() != a.rows() {
        return Err(Error::DimensionMismatch(format!(
            "inner inverse must be {}x{}, got {}x{}",
            a.cols(),
            a.rows(),
            ag.rows(),
            ag.cols()
        )));
    }
    let aga = a.mul(ag).mul(a);
    let inner_resid = aga.sub(a).norm_one();
    if inner_resid > tol * a.norm_one().max(1.0) {
        return Err(Error::Precondition(format!(
            "A A^G A = A fails with residual {inner_resid:.3e}"
        )));
    }
    let particular = ag.mul_vec(b);
    let reached = a.mul_vec(&particular);
    let residual: f64 = reached.iter().zip(b).map(|(x, y)| (x - y).norm()).sum();
    let bscale: f64 = b.iter().map(|z| z.norm()).sum::<f64>();
    let consistent = residual <= tol * bscale.max(1.0);
    let null_projector = ComplexMatrix::identity(a.cols()).sub(&ag.mul(a));
    Ok(MitraSolution {
        consistent,
        particular,
        null_projector,
        residual,
    })
}

/// Square root of an upper triangular matrix by the diagonal recurrence.
fn sqrt_upper_triangular(t: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = t.rows();
    let scale = t.norm_one();
    let zero_tol = 32.0 * f64::EPSILON * (n as f64) * scale.max(1.0);
    let mut s = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        s[(i, i)] = t[(i, i)].sqrt();
    }
    for off in 1..n {
        for i in 0..n - off {
            let j = i + off;
            let mut num = t[(i, j)];
            for k in i + 1..j {
                num -= s[(i, k)] * s[(k, j)];
            }
            let den = s[(i, i)] + s[(j, j)];
            if den.norm() > f64::MIN_POSITIVE {
                s[(i, j)] = num / den;
            } else if num.norm() <= zero_tol {
                s[(i, j)] = Complex64::zero();
            } else {
                return Err(Error::NumericalFailure(format!(
                    "square root does not exist: zero-eigenvalue coupling {:.3e}",
                    num.norm()
                )));
            }
        }
    }
    Ok(s)
}

fn is_upper_triangular(m: &ComplexMatrix) -> bool {
    for i in 0..m.rows() {
        for j in 0..i {
            if !m[(i, j)].is_zero() {
                return false;
            }
        }
    }
    true
}

/// Principal matrix square root: the unique root whose spectrum lies in the
/// closed right half plane (negative real eigenvalues map to the positive
/// imaginary axis, zero maps to zero). Computed on the Schur form.
pub fn principal_sqrt(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = m.require_square()?;
    if !m.is_finite() {
        return Err(Error::NonFinite);
    }
    let root = if is_upper_triangular(m) {
        sqrt_upper_triangular(m)?
    } else {
        let s = schur(m)?;
        let st = sqrt_upper_triangular(&s.t)?;
        s.q.mul(&st).mul(&s.q.adjoint())
    };
    let resid = root.mul(&root).sub(m).norm_one();
    if resid > SQRT_RESID_TOL * m.norm_one().max(f64::MIN_POSITIVE) && n > 0 {
        return Err(Error::NumericalFailure(format!(
            "square root residual {resid:.3e} exceeds tolerance"
        )));
    }
    Ok(root)
}

/// Spectrum of a square matrix, sorted lexicographically (real, imaginary).
pub fn spectrum(a: &ComplexMatrix) -> Result<Spectrum> {
    let s = schur(a)?;
    let mut eigenvalues = s.eigenvalues();
    eigenvalues.sort_by(|x, y| {
        x.re.partial_cmp(&y.re)
            .unwrap()
            .then(x.im.partial_cmp(&y.im).unwrap())
    });
    Ok(Spectrum { eigenvalues })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lu::invert;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn nilpotent2() -> ComplexMatrix {
        ComplexMatrix::from_real_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]).unwrap()
    }

    #[test]
    fn core_nilpotent_identity() {
        let cn = core_nilpotent(&ComplexMatrix::identity(2), 1e-12).unwrap();
        assert_eq!((cn.p, cn.q, cn.index), (2, 0, 0));
    }

    #[test]
    fn core_nilpotent_pure_nilpotent() {
        let cn = core_nilpotent(&nilpotent2(), 1e-12).unwrap();
        assert_eq!((cn.p, cn.q, cn.index), (0, 2, 2));
    }

    #[test]
    fn core_nilpotent_recovers_jordan_structure() {
        // blockdiag(2, J_2(0)) pushed through a fixed similarity
        let j = ComplexMatrix::from_real_rows(&[
            vec![2.0, 0.0, 0.0],
            vec![0.0, 0.0, 1.0],
            vec![0.0, 0.0, 0.0],
        ])
        .unwrap();
        let t = ComplexMatrix::from_real_rows(&[
            vec![1.0, 0.5, -0.25],
            vec![0.0, 1.0, 0.75],
            vec![0.5, -0.5, 1.0],
        ])
        .unwrap();
        let a = t.mul(&j).mul(&invert(&t).unwrap());
        let cn = core_nilpotent(&a, 1e-10).unwrap();
        assert_eq!((cn.p, cn.q, cn.index), (1, 2, 2));
        // the defective zero cluster smears computed eigenvalues over an
        // eps^(1/2) disk; snapping them costs that much in reconstruction
        assert!(cn.reconstruct().sub(&a).norm_one() < 1e-7);
    }

    #[test]
    fn drazin_identity_and_nilpotent() {
        let d = drazin_inverse(&ComplexMatrix::identity(3)).unwrap();
        assert!(d.sub(&ComplexMatrix::identity(3)).norm_one() < 1e-13);
        let z = drazin_inverse(&nilpotent2()).unwrap();
        assert!(z.norm_one() < 1e-13);
    }

    #[test]
    fn drazin_of_invertible_is_inverse() {
        let a = ComplexMatrix::from_rows(&[
            vec![
                c(2.0, 0.3),
                c(0.1, 0.0),
                c(0.0, -0.2),
                c(0.4, 0.0),
                c(0.0, 0.0),
            ],
            vec![
                c(0.0, 0.1),
                c(3.0, 0.0),
                c(0.2, 0.0),
                c(0.0, 0.0),
                c(-0.3, 0.0),
            ],
            vec![
                c(0.5, 0.0),
                c(0.0, 0.0),
                c(-2.5, 0.4),
                c(0.1, 0.1),
                c(0.0, 0.0),
            ],
            vec![
                c(0.0, 0.0),
                c(0.2, -0.1),
                c(0.0, 0.0),
                c(1.8, 0.0),
                c(0.3, 0.0),
            ],
            vec![
                c(-0.1, 0.0),
                c(0.0, 0.0),
                c(0.4, 0.0),
                c(0.0, 0.2),
                c(2.2, -0.5),
            ],
        ])
        .unwrap();
        let d = drazin_inverse(&a).unwrap();
        let inv = invert(&a).unwrap();
        let diff = d.sub(&inv).norm_one();
        assert!(diff < 1e-10, "drazin vs inverse diff {diff}");
    }

    #[test]
    fn drazin_axioms_on_singular_matrix() {
        let a = ComplexMatrix::from_real_rows(&[
            vec![1.0, 1.0, 0.0],
            vec![0.0, 0.0, 1.0],
            vec![0.0, 0.0, 0.0],
        ])
        .unwrap();
        let d = drazin_inverse(&a).unwrap();
        let k = core_nilpotent(&a, 1e-12).unwrap().index;
        assert!(d.mul(&a).mul(&d).sub(&d).norm_one() < 1e-12);
        assert!(d.mul(&a).sub(&a.mul(&d)).norm_one() < 1e-12);
        let mut apow = ComplexMatrix::identity(3);
        for _ in 0..k {
            apow = apow.mul(&a);
        }
        let lhs = apow.mul(&a).mul(&d);
        assert!(lhs.sub(&apow).norm_one() < 1e-12);
    }

    #[test]
    fn group_inverse_examples() {
        let g = group_style_inverse(&ComplexMatrix::diag(&[c(2.0, 0.0), c(0.0, 0.0)])).unwrap();
        assert!(
            g.sub(&ComplexMatrix::diag(&[c(0.5, 0.0), c(0.0, 0.0)]))
                .norm_one()
                < 1e-14
        );

        let a = ComplexMatrix::from_real_rows(&[vec![1.0, 1.0], vec![0.0, 0.0]]).unwrap();
        let ag = group_style_inverse(&a).unwrap();
        assert!(a.mul(&ag).mul(&a).sub(&a).norm_one() < 1e-13);

        assert!(matches!(
            group_style_inverse(&nilpotent2()),
            Err(Error::IndexTooHigh { index: 2 })
        ));

        // invertible input: the group inverse is the plain inverse
        let inv_a = ComplexMatrix::from_rows(&[
            vec![c(2.0, 0.5), c(0.0, -1.0)],
            vec![c(1.0, 0.0), c(3.0, 0.0)],
        ])
        .unwrap();
        let g = group_style_inverse(&inv_a).unwrap();
        assert!(g.sub(&invert(&inv_a).unwrap()).norm_one() < 1e-11);
    }

    #[test]
    fn moore_penrose_identities() {
        let a = ComplexMatrix::from_rows(&[
            vec![c(1.0, 0.5), c(2.0, 0.0)],
            vec![c(0.0, 1.0), c(1.0, -1.0)],
            vec![c(2.0, 0.0), c(4.0, 1.0)],
        ])
        .unwrap();
        let p = moore_penrose(&a, 1e-12).unwrap();
        assert!(a.mul(&p).mul(&a).sub(&a).norm_one() < 1e-12);
        assert!(p.mul(&a).mul(&p).sub(&p).norm_one() < 1e-12);
        let ap = a.mul(&p);
        assert!(ap.adjoint().sub(&ap).norm_one() < 1e-12);
        let pa = p.mul(&a);
        assert!(pa.adjoint().sub(&pa).norm_one() < 1e-12);

        let z = moore_penrose(&ComplexMatrix::zeros(2, 3), 1e-12).unwrap();
        assert_eq!(z.norm_one(), 0.0);

        let inv_a = ComplexMatrix::from_rows(&[
            vec![c(1.0, 0.0), c(0.0, 2.0)],
            vec![c(-1.0, 1.0), c(0.5, 0.0)],
        ])
        .unwrap();
        let mp = moore_penrose(&inv_a, 1e-12).unwrap();
        assert!(mp.sub(&invert(&inv_a).unwrap()).norm_one() < 1e-11);
    }

    #[test]
    fn moore_penrose_single_row_pattern() {
        // 6x3 with only the third column nonzero in the top block
        let d = [2.0, 0.5, -1.0];
        let mut g = ComplexMatrix::zeros(6, 3);
        for (i, &di) in d.iter().enumerate() {
            g[(i, 2)] = c(di, 0.0);
        }
        let gp = moore_penrose(&g, 1e-12).unwrap();
        let denom: f64 = d.iter().map(|x| x * x).sum();
        for (i, &di) in d.iter().enumerate() {
            assert!((gp[(2, i)] - c(di / denom, 0.0)).norm() < 1e-14);
        }
        assert!(gp.norm_one() - d.iter().map(|x| x.abs()).sum::<f64>() / denom < 1e-13);
    }

    #[test]
    fn mitra_classifies_consistency() {
        let a = ComplexMatrix::diag(&[c(1.0, 0.0), c(0.0, 0.0)]);
        let ag = a.clone(); // diag(1,0) is its own inner inverse
        let sol = solve_mitra(&a, &ag, &[c(2.0, 0.0), c(0.0, 0.0)], 1e-10).unwrap();
        assert!(sol.consistent);
        assert!((sol.particular[0] - c(2.0, 0.0)).norm() < 1e-14);
        assert!(
            sol.null_projector
                .sub(&ComplexMatrix::diag(&[c(0.0, 0.0), c(1.0, 0.0)]))
                .norm_one()
                < 1e-14
        );

        let bad = solve_mitra(&a, &ag, &[c(2.0, 0.0), c(1.0, 0.0)], 1e-10).unwrap();
        assert!(!bad.consistent);

        // not an inner inverse
        let wrong = ComplexMatrix::diag(&[c(2.0, 0.0), c(0.0, 0.0)]);
        assert!(matches!(
            solve_mitra(&a, &wrong, &[c(1.0, 0.0), c(0.0, 0.0)], 1e-10),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn principal_sqrt_examples() {
        let s = principal_sqrt(&ComplexMatrix::identity(2)).unwrap();
        assert!(s.sub(&ComplexMatrix::identity(2)).norm_one() < 1e-14);

        let s = principal_sqrt(&ComplexMatrix::diag(&[c(4.0, 0.0), c(9.0, 0.0)])).unwrap();
        assert!(
            s.sub(&ComplexMatrix::diag(&[c(2.0, 0.0), c(3.0, 0.0)]))
                .norm_one()
                < 1e-14
        );

        // (1 + rho d / 2)^2 - 1 < 0: principal root is +i sqrt(1 - (1+rho d/2)^2)
        let rho_d = -1.2_f64;
        let val = (1.0 + rho_d / 2.0) * (1.0 + rho_d / 2.0) - 1.0;
        let s = principal_sqrt(&ComplexMatrix::diag(&[c(val, 0.0)])).unwrap();
        let expect = num_traits::Float::sqrt(-val);
        assert!((s[(0, 0)] - c(0.0, expect)).norm() < 1e-14);
    }

    #[test]
    fn principal_sqrt_nonsemisimple_zero_fails() {
        assert!(principal_sqrt(&nilpotent2()).is_err());
    }

    #[test]
    fn principal_sqrt_commutes_on_dense_input() {
        let m = ComplexMatrix::from_rows(&[
            vec![c(2.0, 0.1), c(0.5, -0.3), c(0.0, 0.0)],
            vec![c(0.2, 0.0), c(3.0, 0.0), c(0.1, 0.1)],
            vec![c(0.0, 0.4), c(0.0, 0.0), c(1.5, 0.2)],
        ])
        .unwrap();
        let s = principal_sqrt(&m).unwrap();
        assert!(s.mul(&m).sub(&m.mul(&s)).norm_one() < 1e-10);
        assert!(s.mul(&s).sub(&m).norm_one() < 1e-10 * m.norm_one());
    }

    #[test]
    fn spectrum_sorted_with_multiplicity() {
        let a = ComplexMatrix::diag(&[c(1.0, 0.0), c(3.0, 0.0), c(0.0, 0.0)]);
        let sp = spectrum(&a).unwrap();
        assert_eq!(sp.eigenvalues.len(), 3);
        assert!((sp.eigenvalues[0] - c(0.0, 0.0)).norm() < 1e-14);
        assert!((sp.eigenvalues[1] - c(1.0, 0.0)).norm() < 1e-14);
        assert!((sp.eigenvalues[2] - c(3.0, 0.0)).norm() < 1e-14);
    }
}
