//! Discretization of the mixed problem, mode coefficients, solution assembly,
//! residual evaluation, and the stability sweep.
//!
//! The assembled solution is
//! `U(i, j) = sum_l (Z0_l^j P P_l + Z1_l^j P Q_l) v_l(i)` over the
//! Sturm-Liouville modes, where `P = Ehat Ehat^D` and the coefficient vectors
//! solve the two initial-layer conditions through the group-style inverse of
//! `(Z1 - Z0) P`. Directions where both propagator roots collapse to 1
//! (zero eigenvalues of `Ehat^D Ahat` inside the core block) carry the static
//! part of the data: there the mode evolves as a constant, which is exactly
//! what the degenerate difference equation admits, and the velocity data must
//! vanish — enforced by the consistency checks.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::Error;
use crate::hypotheses::BoundaryConditions;
use crate::mat::{czero, vec_axpy, vec_norm_one, vec_sub, CVector, ComplexMatrix};
use crate::matfun::{group_style_inverse, solve_mitra};
use crate::pencil::{
    build_propagators, find_gamma, propagators_from_rho, regularize, rho_admissible,
    ModePropagators, RegularizedPencil,
};
use crate::sturm::{expand_vector, solve_sl, SLEigensystem, SLProblem};
use crate::{Result, Tolerances};

/// The discrete mixed problem: coefficients, boundary operators, boundary
/// scalars, grid geometry, and the initial data sampled on the nodes.
#[derive(Debug, Clone)]
pub struct MixedProblem {
    pub e: ComplexMatrix,
    pub a: ComplexMatrix,
    pub bc: BoundaryConditions,
    pub alpha: f64,
    pub beta: f64,
    /// Spatial subdivisions; `h = 1/N`.
    pub n: usize,
    /// Time step.
    pub k: f64,
    /// Time horizon; the step count is `M = round(T / k)`.
    pub t_final: f64,
    /// Initial displacement samples `F(i)`, `0 <= i <= N`.
    pub f: Vec<CVector>,
    /// Initial velocity samples `G(i)`, `0 <= i <= N`.
    pub gdata: Vec<CVector>,
}

impl MixedProblem {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        e: ComplexMatrix,
        a: ComplexMatrix,
        bc: BoundaryConditions,
        alpha: f64,
        beta: f64,
        n: usize,
        k: f64,
        t_final: f64,
        f: Vec<CVector>,
        gdata: Vec<CVector>,
    ) -> Result<Self> {
        let m = e.require_square()?;
        if a.rows() != m || a.cols() != m {
            return Err(Error::DimensionMismatch(format!(
                "A must be {m}x{m}, got {}x{}",
                a.rows(),
                a.cols()
            )));
        }
        bc.check_dims(m)?;
        if !e.is_finite() || !a.is_finite() {
            return Err(Error::NonFinite);
        }
        if n < 3 {
            return Err(Error::Precondition(format!(
                "need N >= 3 subdivisions, got {n}"
            )));
        }
        let positive = |x: f64| x.is_finite() && x > 0.0;
        if !positive(k) || !positive(t_final) {
            return Err(Error::Precondition(
                "time step and horizon must be positive finite".into(),
            ));
        }
        let r = k * n as f64;
        if !r.is_finite() || r <= 0.0 {
            return Err(Error::Precondition(
                "mesh ratio r = k*N must be positive finite".into(),
            ));
        }
        for (name, grid) in [("F", &f), ("G", &gdata)] {
            if grid.len() != n + 1 {
                return Err(Error::DimensionMismatch(format!(
                    "{name} grid must have N+1 = {} entries, got {}",
                    n + 1,
                    grid.len()
                )));
            }
            if grid.iter().any(|v| v.len() != m) {
                return Err(Error::DimensionMismatch(format!(
                    "{name} grid entries must have dimension {m}"
                )));
            }
            if grid
                .iter()
                .flatten()
                .any(|z| !z.re.is_finite() || !z.im.is_finite())
            {
                return Err(Error::NonFinite);
            }
        }
        Ok(MixedProblem {
            e,
            a,
            bc,
            alpha,
            beta,
            n,
            k,
            t_final,
            f,
            gdata,
        })
    }

    /// System dimension `m`.
    pub fn m(&self) -> usize {
        self.e.rows()
    }

    /// Mesh ratio `r = k / h = k N`.
    pub fn r(&self) -> f64 {
        self.k * self.n as f64
    }

    /// Time steps `M = round(T / k)`, at least 1.
    pub fn m_steps(&self) -> usize {
        let m = num_traits::Float::round(self.t_final / self.k) as usize;
        m.max(1)
    }
}

/// Sample a callable profile on the nodes `x_i = i / N`, `0 <= i <= N`.
pub fn discretize<F>(profile: F, n: usize) -> Vec<CVector>
where
    F: Fn(f64) -> CVector,
{
    (0..=n).map(|i| profile(i as f64 / n as f64)).collect()
}

/// Everything stored per mode in an assembled solution.
#[derive(Debug, Clone)]
pub struct ModeData {
    /// 1-based mode index.
    pub l: usize,
    pub lambda: f64,
    pub rho: f64,
    /// Eigenfunction values over the full grid `0..=N`.
    pub v_ext: Vec<f64>,
    pub p_l: CVector,
    pub q_l: CVector,
    pub propagators: ModePropagators,
}

/// The assembled solution grid and the modes that produced it.
#[derive(Debug, Clone)]
pub struct DiscreteSolution {
    /// `u[i][j]` is the solution vector at node `(i, j)`, `0 <= i <= N`,
    /// `0 <= j <= M`.
    pub u: Vec<Vec<CVector>>,
    pub modes: Vec<ModeData>,
}

impl DiscreteSolution {
    /// Largest vector 1-norm over the grid (the stability functional).
    pub fn max_norm_one(&self) -> f64 {
        self.u
            .iter()
            .flat_map(|col| col.iter())
            .map(|v| vec_norm_one(v))
            .fold(0.0, f64::max)
    }
}

/// Mode coefficients from already-expanded data vectors.
///
/// Solves the two initial-layer conditions with Mitra's criterion through the
/// group-style inverse of `M = (Z1 - Z0) P` and adds the static-direction
/// term `(P - M M^G) F_l`. Inconsistency means the data excites a degenerate
/// direction the propagator pair cannot represent (velocity data in a static
/// direction), which violates the solvability hypotheses.
fn mode_coefficients_from(
    rp: &RegularizedPencil,
    mp: &ModePropagators,
    f_l: &[Complex64],
    g_l: &[Complex64],
    k: f64,
    tol: f64,
) -> Result<(CVector, CVector)> {
    let m = rp.dim();
    let id = ComplexMatrix::identity(m);
    let mz = mp.z1.sub(&mp.z0).mul(&rp.projector);
    let mg = group_style_inverse(&mz)?;
    let kc = Complex64::new(k, 0.0);

    // rhs_P = (Z1 - I) F_l - k G_l ; rhs_Q = k G_l + (I - Z0) F_l
    let rhs_p = vec_sub(
        &mp.z1.sub(&id).mul_vec(f_l),
        &crate::mat::vec_scale(g_l, kc),
    );
    let rhs_q = crate::mat::vec_add(
        &crate::mat::vec_scale(g_l, kc),
        &id.sub(&mp.z0).mul_vec(f_l),
    );

    let sol_p = solve_mitra(&mz, &mg, &rhs_p, tol)?;
    if !sol_p.consistent {
        return Err(Error::HypothesisViolation(format!(
            "mode {}: displacement system inconsistent (residual {:.3e}); \
             the data excites a degenerate propagator direction",
            mp.mode, sol_p.residual
        )));
    }
    let sol_q = solve_mitra(&mz, &mg, &rhs_q, tol)?;
    if !sol_q.consistent {
        return Err(Error::HypothesisViolation(format!(
            "mode {}: velocity system inconsistent (residual {:.3e}); \
             velocity data must vanish in static directions",
            mp.mode, sol_q.residual
        )));
    }

    // static directions: P - M M^G projects onto the double-root part
    let static_proj = rp.projector.sub(&mz.mul(&mg));
    let mut p_l = sol_p.particular;
    vec_axpy(
        &mut p_l,
        Complex64::new(1.0, 0.0),
        &static_proj.mul_vec(f_l),
    );
    Ok((p_l, sol_q.particular))
}

/// Mode coefficients for mode `l` (0-based index into the eigensystem) from
/// the full data grids.
#[allow(clippy::too_many_arguments)]
pub fn mode_coefficients(
    l: usize,
    es: &SLEigensystem,
    rp: &RegularizedPencil,
    mp: &ModePropagators,
    f: &[CVector],
    gdata: &[CVector],
    k: f64,
    tol: f64,
) -> Result<(CVector, CVector)> {
    let n = f.len() - 1;
    let f_modes = expand_vector(&f[1..n], es)?;
    let g_modes = expand_vector(&gdata[1..n], es)?;
    mode_coefficients_from(rp, mp, &f_modes[l], &g_modes[l], k, tol)
}

/// Assemble the discrete solution for the full problem.
///
/// Modes whose data coefficients vanish are carried with zero coefficients
/// (they contribute nothing and need no admissibility); every data-carrying
/// mode must pass the admissibility checks. The grid accumulates mode
/// contributions in ascending mode order, so the output is reproducible
/// bit for bit in a fixed rounding environment.
pub fn assemble(problem: &MixedProblem, tols: &Tolerances) -> Result<DiscreteSolution> {
    let gamma = find_gamma(&problem.e, &problem.a, tols.cond_max)?;
    let rp = regularize(&problem.e, &problem.a, gamma)?;
    let sl = SLProblem::new(problem.n, problem.alpha, problem.beta)?;
    let es = solve_sl(&sl)?;
    assemble_with(problem, &rp, &es, tols)
}

/// Assembly from a prepared pencil and eigensystem.
pub fn assemble_with(
    problem: &MixedProblem,
    rp: &RegularizedPencil,
    es: &SLEigensystem,
    tols: &Tolerances,
) -> Result<DiscreteSolution> {
    let m = problem.m();
    let n = problem.n;
    let m_steps = problem.m_steps();
    let r = problem.r();
    let lambda_max = es.lambda_max_abs();

    let f_modes = expand_vector(&problem.f[1..n], es)?;
    let g_modes = expand_vector(&problem.gdata[1..n], es)?;
    let data_scale = problem
        .f
        .iter()
        .chain(problem.gdata.iter())
        .map(|v| vec_norm_one(v))
        .fold(0.0, f64::max)
        .max(1.0);

    let mut u = vec![vec![czero(m); m_steps + 1]; n + 1];
    let mut modes = Vec::with_capacity(es.modes());

    for l in 0..es.modes() {
        let lambda = es.lambdas[l];
        let rho = -r * r * lambda;
        let coeff_mass = vec_norm_one(&f_modes[l]) + vec_norm_one(&g_modes[l]);
        let vacuous = coeff_mass <= tols.residual_tol * data_scale;

        let (mp, p_l, q_l) = if vacuous {
            let mp = propagators_from_rho(rp, l + 1, rho)?;
            (mp, czero(m), czero(m))
        } else {
            let adm = rho_admissible(rho, rp, lambda_max, r, tols.residual_tol);
            if !adm.ok {
                return Err(Error::HypothesisViolation(format!(
                    "mode {} carries data but rho = {rho:.6e} is inadmissible: {}",
                    l + 1,
                    adm.reasons.join("; ")
                )));
            }
            let mp = build_propagators(rp, l + 1, lambda, r)?;
            let (p_l, q_l) = mode_coefficients_from(
                rp,
                &mp,
                &f_modes[l],
                &g_modes[l],
                problem.k,
                tols.residual_tol,
            )?;
            (mp, p_l, q_l)
        };

        let v_ext = es.extended(l);
        let mut a = rp.projector.mul_vec(&p_l);
        let mut b = rp.projector.mul_vec(&q_l);
        for j in 0..=m_steps {
            let w = crate::mat::vec_add(&a, &b);
            for (i, &vi) in v_ext.iter().enumerate() {
                vec_axpy(&mut u[i][j], Complex64::new(vi, 0.0), &w);
            }
            if j < m_steps {
                a = mp.z0.mul_vec(&a);
                b = mp.z1.mul_vec(&b);
            }
        }
        modes.push(ModeData {
            l: l + 1,
            lambda,
            rho,
            v_ext,
            p_l,
            q_l,
            propagators: mp,
        });
    }

    Ok(DiscreteSolution { u, modes })
}

/// Synthesize raw data through the eigenmodes that are strictly admissible at
/// mesh ratio `r`, dropping the rest. The result lies exactly in the span of
/// the boundary-extended admissible eigenfunctions, so the assembled solution
/// reproduces it at every node including the boundary.
pub fn synthesize_through_modes(
    raw: &[CVector],
    es: &SLEigensystem,
    rp: &RegularizedPencil,
    r: f64,
    tol: f64,
) -> Result<Vec<CVector>> {
    let n = raw.len() - 1;
    let m = raw.first().map_or(0, Vec::len);
    let coeffs = expand_vector(&raw[1..n], es)?;
    let lambda_max = es.lambda_max_abs();
    let mut out = vec![czero(m); n + 1];
    for l in 0..es.modes() {
        let rho = -r * r * es.lambdas[l];
        if !rho_admissible(rho, rp, lambda_max, r, tol).ok {
            continue;
        }
        let v_ext = es.extended(l);
        for (i, &vi) in v_ext.iter().enumerate() {
            vec_axpy(&mut out[i], Complex64::new(vi, 0.0), &coeffs[l]);
        }
    }
    Ok(out)
}

/// Maximum residual norms of the assembled solution against the scheme,
/// boundary, and initial relations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchemeResiduals {
    /// Interior stencil residual over `0 < i < N`, `0 < j < M`.
    pub interior: f64,
    /// Left boundary relation over all `j`.
    pub boundary0: f64,
    /// Right boundary relation over all `j`.
    pub boundary_n: f64,
    /// `max |U(i,0) - F(i)|` over interior nodes.
    pub init0: f64,
    /// `max |(U(i,1) - U(i,0))/k - G(i)|` over interior nodes.
    pub init1: f64,
}

impl SchemeResiduals {
    pub fn max(&self) -> f64 {
        self.interior
            .max(self.boundary0)
            .max(self.boundary_n)
            .max(self.init0)
            .max(self.init1)
    }
}

/// Evaluate the five residual families on an assembled (or stepped) grid.
pub fn scheme_residual(u: &[Vec<CVector>], problem: &MixedProblem) -> SchemeResiduals {
    let n = problem.n;
    let m_steps = u.first().map_or(0, |col| col.len().saturating_sub(1));
    let r = problem.r();
    let r2 = Complex64::new(r * r, 0.0);
    let two = Complex64::new(2.0, 0.0);
    let nf = Complex64::new(n as f64, 0.0);

    // interior stencil: r^2 A (U(i+1,j) + U(i-1,j)) + 2(E - r^2 A) U(i,j)
    //                   - E (U(i,j+1) + U(i,j-1))
    let a_r2 = problem.a.scale(r2);
    let two_e_minus = problem.e.sub(&a_r2).scale(two);
    let mut interior = 0.0_f64;
    for i in 1..n {
        for j in 1..m_steps {
            let s1 = a_r2.mul_vec(&crate::mat::vec_add(&u[i + 1][j], &u[i - 1][j]));
            let s2 = two_e_minus.mul_vec(&u[i][j]);
            let s3 = problem
                .e
                .mul_vec(&crate::mat::vec_add(&u[i][j + 1], &u[i][j - 1]));
            let res: f64 = (0..problem.m())
                .map(|p| (s1[p] + s2[p] - s3[p]).norm())
                .sum();
            interior = interior.max(res);
        }
    }

    let mut boundary0 = 0.0_f64;
    let mut boundary_n = 0.0_f64;
    for j in 0..=m_steps {
        let d0 = vec_sub(&u[1][j], &u[0][j]);
        let r0 = crate::mat::vec_add(
            &problem.bc.a1.mul_vec(&u[0][j]),
            &problem.bc.a2.scale(nf).mul_vec(&d0),
        );
        boundary0 = boundary0.max(vec_norm_one(&r0));
        let dn = vec_sub(&u[n][j], &u[n - 1][j]);
        let rn = crate::mat::vec_add(
            &problem.bc.b1.mul_vec(&u[n][j]),
            &problem.bc.b2.scale(nf).mul_vec(&dn),
        );
        boundary_n = boundary_n.max(vec_norm_one(&rn));
    }

    let mut init0 = 0.0_f64;
    let mut init1 = 0.0_f64;
    let kinv = Complex64::new(1.0 / problem.k, 0.0);
    for i in 1..n {
        init0 = init0.max(vec_norm_one(&vec_sub(&u[i][0], &problem.f[i])));
        let fd = crate::mat::vec_scale(&vec_sub(&u[i][1], &u[i][0]), kinv);
        init1 = init1.max(vec_norm_one(&vec_sub(&fd, &problem.gdata[i])));
    }

    SchemeResiduals {
        interior,
        boundary0,
        boundary_n,
        init0,
        init1,
    }
}

/// One row of the stability sweep.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub k: f64,
    pub m_steps: usize,
    pub max_norm: f64,
    pub error: Option<String>,
}

/// The sweep table and its boundedness verdict.
#[derive(Debug, Clone)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
    /// True when every row assembled and the successive max-norm ratios stay
    /// below `1 + eps_growth`.
    pub bounded: bool,
}

/// Halve the time step `halvings` times with `M k = T` fixed (and `h` fixed),
/// recording the grid max norm of each run.
pub fn stability_sweep(problem: &MixedProblem, halvings: usize, tols: &Tolerances) -> SweepResult {
    let prep = find_gamma(&problem.e, &problem.a, tols.cond_max)
        .and_then(|gamma| regularize(&problem.e, &problem.a, gamma))
        .and_then(|rp| {
            let sl = SLProblem::new(problem.n, problem.alpha, problem.beta)?;
            Ok((rp, solve_sl(&sl)?))
        });
    match prep {
        Ok((rp, es)) => stability_sweep_with(problem, &rp, &es, halvings, tols),
        Err(e) => {
            // every row fails the same way
            let msg = e.to_string();
            let rows = (0..=halvings)
                .map(|s| {
                    let k_s = problem.k / (1u64 << s) as f64;
                    let mut sub = problem.clone();
                    sub.k = k_s;
                    SweepRow {
                        k: k_s,
                        m_steps: sub.m_steps(),
                        max_norm: f64::NAN,
                        error: Some(msg.clone()),
                    }
                })
                .collect();
            SweepResult {
                rows,
                bounded: false,
            }
        }
    }
}

/// Sweep with a prepared pencil and eigensystem (the shift and the spatial
/// eigenproblem do not depend on `k`).
pub fn stability_sweep_with(
    problem: &MixedProblem,
    rp: &RegularizedPencil,
    es: &SLEigensystem,
    halvings: usize,
    tols: &Tolerances,
) -> SweepResult {
    let mut rows = Vec::with_capacity(halvings + 1);
    let mut bounded = true;
    let mut prev: Option<f64> = None;
    for s in 0..=halvings {
        let k_s = problem.k / (1u64 << s) as f64;
        let mut sub = problem.clone();
        sub.k = k_s;
        let m_steps = sub.m_steps();
        match assemble_with(&sub, rp, es, tols) {
            Ok(sol) => {
                let max_norm = sol.max_norm_one();
                if let Some(p) = prev {
                    if p > 0.0 && max_norm / p > 1.0 + tols.eps_growth {
                        bounded = false;
                    }
                }
                prev = Some(max_norm);
                rows.push(SweepRow {
                    k: k_s,
                    m_steps,
                    max_norm,
                    error: None,
                });
            }
            Err(e) => {
                bounded = false;
                rows.push(SweepRow {
                    k: k_s,
                    m_steps,
                    max_norm: f64::NAN,
                    error: Some(e.to_string()),
                });
            }
        }
    }
    SweepResult { rows, bounded }
}
