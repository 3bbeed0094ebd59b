//! Independent brute-force verifiers: direct time stepping of the scheme,
//! a Jacobi eigensolver for the Sturm-Liouville matrix, and a limit-style
//! Drazin construction through the Moore-Penrose inverse. None of these share
//! the analytic propagator/eigen-expansion path they are used to check.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::Float;

use crate::error::Error;
use crate::lu::{cond_one, LuFactors};
use crate::mat::{czero, vec_add, vec_norm_one, vec_scale, CVector, ComplexMatrix};
use crate::matfun::{default_rank_tol, invert_upper_triangular, moore_penrose};
use crate::pencil::{find_gamma, regularize};
use crate::solver::MixedProblem;
use crate::sturm::{build_sl_matrix, SLEigensystem, SLProblem};
use crate::svd::svd;
use crate::{Result, Tolerances};

/// How a stepped solution was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SteppingMethod {
    /// `E` invertible: explicit stencil advance with `E^-1`.
    ExplicitNonsingular,
    /// `E` singular: premultiplied stencil solved with a core-respecting
    /// inner inverse, layers confined to `range(Ehat Ehat^D)`.
    ProjectedSingular,
}

/// Reference solution produced by direct time stepping.
#[derive(Debug, Clone)]
pub struct SteppedSolution {
    pub u: Vec<Vec<CVector>>,
    pub method: SteppingMethod,
}

impl SteppedSolution {
    pub fn max_norm_one(&self) -> f64 {
        self.u
            .iter()
            .flat_map(|col| col.iter())
            .map(|v| vec_norm_one(v))
            .fold(0.0, f64::max)
    }
}

/// Boundary completion operator: solves `mat * x = rhs` with `x` restricted
/// to `range(proj)`, minimum norm there.
struct BoundarySolver {
    mat: ComplexMatrix,
    apply: ComplexMatrix,
}

impl BoundarySolver {
    fn new(mat: ComplexMatrix, proj: &ComplexMatrix, rank_tol: f64) -> Result<Self> {
        let pinv = moore_penrose(&mat.mul(proj), rank_tol)?;
        Ok(BoundarySolver {
            apply: proj.mul(&pinv),
            mat,
        })
    }

    fn solve(&self, rhs: &[Complex64], tol: f64, j: usize) -> Result<CVector> {
        let x = self.apply.mul_vec(rhs);
        let reached = self.mat.mul_vec(&x);
        let resid: f64 = reached.iter().zip(rhs).map(|(a, b)| (a - b).norm()).sum();
        if resid > tol * vec_norm_one(rhs).max(1.0) {
            return Err(Error::InfeasibleBoundary { j });
        }
        Ok(x)
    }
}

fn init_layers(problem: &MixedProblem, m_steps: usize) -> Vec<Vec<CVector>> {
    let n = problem.n;
    let m = problem.m();
    let kc = Complex64::new(problem.k, 0.0);
    let mut u = vec![vec![czero(m); m_steps + 1]; n + 1];
    for i in 0..=n {
        u[i][0] = problem.f[i].clone();
        u[i][1] = vec_add(&problem.f[i], &vec_scale(&problem.gdata[i], kc));
    }
    u
}

/// Explicit stepping for invertible `E`: interior nodes advance through the
/// stencil solved with `E`, boundary nodes through the boundary relations.
pub fn step_nonsingular(problem: &MixedProblem, tols: &Tolerances) -> Result<SteppedSolution> {
    if cond_one(&problem.e) >= tols.cond_max {
        return Err(Error::Precondition(
            "step_nonsingular requires an invertible E".into(),
        ));
    }
    let n = problem.n;
    let m_steps = problem.m_steps();
    let r2 = Complex64::new(problem.r() * problem.r(), 0.0);
    let nf = Complex64::new(n as f64, 0.0);
    let mut u = init_layers(problem, m_steps);

    let e_lu = LuFactors::new(&problem.e)?;
    let a_r2 = problem.a.scale(r2);
    let two_e_minus = problem.e.sub(&a_r2).scale(Complex64::new(2.0, 0.0));
    let id = ComplexMatrix::identity(problem.m());
    let rank_tol = default_rank_tol(problem.m());
    let left = BoundarySolver::new(problem.bc.a1.sub(&problem.bc.a2.scale(nf)), &id, rank_tol)?;
    let right = BoundarySolver::new(problem.bc.b1.add(&problem.bc.b2.scale(nf)), &id, rank_tol)?;

    for j in 1..m_steps {
        for i in 1..n {
            let s1 = a_r2.mul_vec(&vec_add(&u[i + 1][j], &u[i - 1][j]));
            let s2 = two_e_minus.mul_vec(&u[i][j]);
            let s3 = problem.e.mul_vec(&u[i][j - 1]);
            let rhs: CVector = (0..problem.m()).map(|p| s1[p] + s2[p] - s3[p]).collect();
            u[i][j + 1] = e_lu.solve(&rhs);
        }
        let rhs0 = vec_scale(&problem.bc.a2.mul_vec(&u[1][j + 1]), -nf);
        u[0][j + 1] = left.solve(&rhs0, tols.residual_tol, j)?;
        let rhsn = vec_scale(&problem.bc.b2.mul_vec(&u[n - 1][j + 1]), nf);
        u[n][j + 1] = right.solve(&rhsn, tols.residual_tol, j)?;
    }
    Ok(SteppedSolution {
        u,
        method: SteppingMethod::ExplicitNonsingular,
    })
}

/// Stepping for singular `E`: the stencil is premultiplied by
/// `(gamma E + A)^-1` and each layer solved with the core-respecting inner
/// inverse `T (C^-1 + N^+) T^-1` of `Ehat` (the free term of the solution
/// family set to zero). An inconsistent layer is reported with the time level
/// it was stepped from; it indicates data violating the solvability
/// conditions.
pub fn step_singular(problem: &MixedProblem, tols: &Tolerances) -> Result<SteppedSolution> {
    let gamma = find_gamma(&problem.e, &problem.a, tols.cond_max)?;
    let rp = regularize(&problem.e, &problem.a, gamma)?;
    let n = problem.n;
    let m = problem.m();
    let m_steps = problem.m_steps();
    let r2 = Complex64::new(problem.r() * problem.r(), 0.0);
    let nf = Complex64::new(n as f64, 0.0);
    let mut u = init_layers(problem, m_steps);

    // inner inverse of Ehat valid for any index
    let c_inv = invert_upper_triangular(&rp.core.c)?;
    let n_pinv = moore_penrose(&rp.core.n, default_rank_tol(rp.core.q.max(1)))?;
    let ag = rp.core.assemble(&c_inv, &n_pinv);

    let a_r2 = rp.ahat.scale(r2);
    let two_e_minus = rp.ehat.sub(&a_r2).scale(Complex64::new(2.0, 0.0));
    let rank_tol = default_rank_tol(m);
    let left = BoundarySolver::new(
        problem.bc.a1.sub(&problem.bc.a2.scale(nf)),
        &rp.projector,
        rank_tol,
    )?;
    let right = BoundarySolver::new(
        problem.bc.b1.add(&problem.bc.b2.scale(nf)),
        &rp.projector,
        rank_tol,
    )?;

    let data_scale = problem
        .f
        .iter()
        .chain(problem.gdata.iter())
        .map(|v| vec_norm_one(v))
        .fold(0.0, f64::max)
        .max(1.0);

    for j in 1..m_steps {
        for i in 1..n {
            let s1 = a_r2.mul_vec(&vec_add(&u[i + 1][j], &u[i - 1][j]));
            let s2 = two_e_minus.mul_vec(&u[i][j]);
            let s3 = rp.ehat.mul_vec(&u[i][j - 1]);
            let rhs: CVector = (0..m).map(|p| s1[p] + s2[p] - s3[p]).collect();
            let x = ag.mul_vec(&rhs);
            let reached = rp.ehat.mul_vec(&x);
            let resid: f64 = reached.iter().zip(&rhs).map(|(a, b)| (a - b).norm()).sum();
            if resid > tols.residual_tol * data_scale {
                return Err(Error::InconsistentStep {
                    j,
                    detail: format!("node {i}: residual {resid:.3e}"),
                });
            }
            u[i][j + 1] = x;
        }
        let rhs0 = vec_scale(&problem.bc.a2.mul_vec(&u[1][j + 1]), -nf);
        u[0][j + 1] = left.solve(&rhs0, tols.residual_tol, j)?;
        let rhsn = vec_scale(&problem.bc.b2.mul_vec(&u[n - 1][j + 1]), nf);
        u[n][j + 1] = right.solve(&rhsn, tols.residual_tol, j)?;
    }
    Ok(SteppedSolution {
        u,
        method: SteppingMethod::ProjectedSingular,
    })
}

/// Limit-style Drazin construction `A^D = A^k (A^{2k+1})^+ A^k` with the
/// index `k` found по rank stagnation of the powers.
#[derive(Debug, Clone)]
pub struct DrazinLimit {
    pub value: ComplexMatrix,
    /// False when the kept singular values of `A^{2k+1}` sit close enough to
    /// the noise floor that the construction loses accuracy.
    pub reliable: bool,
}

pub fn drazin_by_limit(a: &ComplexMatrix) -> Result<DrazinLimit> {
    let m = a.require_square()?;
    let scale = a.norm_one();
    if scale == 0.0 {
        return Ok(DrazinLimit {
            value: ComplexMatrix::zeros(m, m),
            reliable: true,
        });
    }
    let a_s = a.scale(Complex64::new(1.0 / scale, 0.0));

    // index = smallest k with rank(A^k) = rank(A^{k+1}); the cutoff is
    // anchored to the first power so a power that collapses to roundoff
    // cannot contribute noise rank
    let abs_cut = 1e-10 * svd(&a_s)?.s.first().copied().unwrap_or(0.0);
    let rank_of = |mat: &ComplexMatrix| -> Result<usize> {
        let d = svd(mat)?;
        Ok(d.rank(abs_cut))
    };
    let mut k = 0usize;
    let mut pow = ComplexMatrix::identity(m);
    let mut rank_prev = m;
    loop {
        let next = pow.mul(&a_s);
        let rank_next = rank_of(&next)?;
        if rank_next == rank_prev || k >= m {
            break;
        }
        pow = next;
        rank_prev = rank_next;
        k += 1;
    }

    // A_s^k and A_s^{2k+1}
    let mut ak = ComplexMatrix::identity(m);
    for _ in 0..k {
        ak = ak.mul(&a_s);
    }
    let mut a2k1 = ComplexMatrix::identity(m);
    for _ in 0..2 * k + 1 {
        a2k1 = a2k1.mul(&a_s);
    }
    let d = svd(&a2k1)?;
    let kept: Vec<f64> = d.s.iter().copied().filter(|&x| x > abs_cut).collect();
    let reliable = match (kept.last(), kept.first()) {
        (Some(&smin), Some(&smax)) => smin > 1e-11 * smax,
        _ => true,
    };
    // pinv cut on the same absolute scale
    let sig_max = d.s.first().copied().unwrap_or(0.0).max(f64::MIN_POSITIVE);
    let pinv = moore_penrose(&a2k1, abs_cut / sig_max)?;
    let value = ak
        .mul(&pinv)
        .mul(&ak)
        .scale(Complex64::new(1.0 / scale, 0.0));
    Ok(DrazinLimit { value, reliable })
}

/// Dense symmetric Jacobi eigensolver for the Sturm-Liouville matrix; an
/// algorithmically independent cross-check of `sturm::solve_sl`.
pub fn sl_dense_oracle(p: &SLProblem) -> Result<SLEigensystem> {
    let mc = build_sl_matrix(p);
    let dim = p.n - 1;
    // the matrix is real with symmetric off-diagonals by construction
    let mut a = vec![vec![0.0_f64; dim]; dim];
    for i in 0..dim {
        for j in 0..dim {
            a[i][j] = mc[(i, j)].re;
            let asym = (mc[(i, j)] - mc[(j, i)].conj()).norm();
            if asym > 1e-14 * (1.0 + mc.norm_one()) {
                return Err(Error::Precondition(String::from(
                    "Jacobi oracle needs a symmetric matrix",
                )));
            }
        }
    }
    let mut v = vec![vec![0.0_f64; dim]; dim];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = 1.0;
    }

    let off = |a: &Vec<Vec<f64>>| -> f64 {
        let mut s = 0.0;
        for i in 0..dim {
            for j in 0..dim {
                if i != j {
                    s += a[i][j] * a[i][j];
                }
            }
        }
        Float::sqrt(s)
    };
    let scale = mc.norm_one().max(1.0);
    for _ in 0..100 {
        if off(&a) <= 1e-14 * scale {
            break;
        }
        for p_idx in 0..dim {
            for q_idx in p_idx + 1..dim {
                let apq = a[p_idx][q_idx];
                if apq.abs() <= 1e-300 {
                    continue;
                }
                let tau = (a[q_idx][q_idx] - a[p_idx][p_idx]) / (2.0 * apq);
                let t = {
                    let sgn = if tau >= 0.0 { 1.0 } else { -1.0 };
                    sgn / (tau.abs() + Float::sqrt(1.0 + tau * tau))
                };
                let c = 1.0 / Float::sqrt(1.0 + t * t);
                let s = t * c;
                for i in 0..dim {
                    let aip = a[i][p_idx];
                    let aiq = a[i][q_idx];
                    a[i][p_idx] = c * aip - s * aiq;
                    a[i][q_idx] = s * aip + c * aiq;
                }
                for jj in 0..dim {
                    let apj = a[p_idx][jj];
                    let aqj = a[q_idx][jj];
                    a[p_idx][jj] = c * apj - s * aqj;
                    a[q_idx][jj] = s * apj + c * aqj;
                }
                for i in 0..dim {
                    let vip = v[i][p_idx];
                    let viq = v[i][q_idx];
                    v[i][p_idx] = c * vip - s * viq;
                    v[i][q_idx] = s * vip + c * viq;
                }
            }
        }
    }
    if off(&a) > 1e-10 * scale {
        return Err(Error::NumericalFailure(String::from(
            "Jacobi iteration did not converge",
        )));
    }

    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&x, &y| a[x][x].partial_cmp(&a[y][y]).unwrap());
    let nf = p.n as f64;
    let (c0, cn) = (
        p.alpha * nf / (p.alpha * nf - 1.0),
        p.beta * nf / (1.0 + p.beta * nf),
    );
    let mut lambdas = Vec::with_capacity(dim);
    let mut vectors = Vec::with_capacity(dim);
    let mut v0 = Vec::with_capacity(dim);
    let mut vn = Vec::with_capacity(dim);
    for &kk in &order {
        lambdas.push(a[kk][kk]);
        let mut col: Vec<f64> = (0..dim).map(|i| v[i][kk]).collect();
        let norm = Float::sqrt(col.iter().map(|x| x * x).sum::<f64>());
        let vmax = col.iter().map(|x| x.abs()).fold(0.0, f64::max);
        let mut sign = 1.0;
        for &x in &col {
            if x.abs() > 1e-8 * vmax {
                sign = if x >= 0.0 { 1.0 } else { -1.0 };
                break;
            }
        }
        for x in &mut col {
            *x *= sign / norm;
        }
        v0.push(c0 * col[0]);
        vn.push(cn * col[dim - 1]);
        vectors.push(col);
    }
    Ok(SLEigensystem {
        lambdas,
        vectors,
        v0,
        vn,
        max_imag: 0.0,
    })
}
