//! Regularization of the singular pair `(E, A)` and the per-mode propagator
//! matrices of the singular matrix difference equation
//! `E G(j+1) - (2E + rho A) G(j) + E G(j-1) = 0`.
//!
//! With a shift `gamma` making `gamma E + A` invertible, define
//! `Ehat = (gamma E + A)^-1 E` and `Ahat = (gamma E + A)^-1 A = I - gamma Ehat`.
//! Everything downstream is a function of `Ehat`, so all the matrices here
//! commute; the propagators are
//! `Z0/Z1 = (I + rho/2 X +- sqrt((I + rho/2 X)^2 - I)) * Ehat Ehat^D`
//! with `X = Ehat^D Ahat`, computed on the invertible core block where the
//! square root argument stays away from the zero cluster.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::Error;
use crate::lu::{cond_one, invert};
use crate::mat::{vec_add, CVector, ComplexMatrix};
use crate::matfun::{
    core_nilpotent, default_rank_tol, drazin_from_decomposition, invert_upper_triangular,
    CoreNilpotentDecomposition, Spectrum,
};
use crate::Result;

/// Deterministic shift candidates, tried in order after scaling.
const GAMMA_CANDIDATES: [Complex64; 16] = [
    Complex64::new(1.0, 0.0),
    Complex64::new(-1.0, 0.0),
    Complex64::new(2.0, 0.0),
    Complex64::new(-2.0, 0.0),
    Complex64::new(0.0, 1.0),
    Complex64::new(0.0, -1.0),
    Complex64::new(10.0, 0.0),
    Complex64::new(-10.0, 0.0),
    Complex64::new(0.5, 0.0),
    Complex64::new(-0.5, 0.0),
    Complex64::new(0.0, 10.0),
    Complex64::new(0.0, -10.0),
    Complex64::new(100.0, 0.0),
    Complex64::new(-100.0, 0.0),
    Complex64::new(1.0, 1.0),
    Complex64::new(-1.0, -1.0),
];

/// The regularized pencil and everything derived from it.
#[derive(Debug, Clone)]
pub struct RegularizedPencil {
    pub gamma: Complex64,
    /// `(gamma E + A)^-1 E`.
    pub ehat: ComplexMatrix,
    /// `(gamma E + A)^-1 A`.
    pub ahat: ComplexMatrix,
    /// Drazin inverse of `ehat`.
    pub ehat_d: ComplexMatrix,
    /// Core projector `Ehat * Ehat^D`.
    pub projector: ComplexMatrix,
    /// Core-nilpotent decomposition of `ehat`.
    pub core: CoreNilpotentDecomposition,
    /// `D = C^-1 - gamma I` on the core block; its diagonal is the nonzero
    /// part of the spectrum of `Ehat^D Ahat` (plus possible core zeros).
    pub d_core: ComplexMatrix,
}

impl RegularizedPencil {
    pub fn dim(&self) -> usize {
        self.ehat.rows()
    }

    /// `X = Ehat^D * Ahat` assembled at full size.
    pub fn x_full(&self) -> ComplexMatrix {
        self.ehat_d.mul(&self.ahat)
    }

    /// Spectrum of `Ehat^D Ahat`: the diagonal of `D` plus `q` zeros.
    pub fn x_spectrum(&self) -> Spectrum {
        let mut eigenvalues: Vec<Complex64> =
            (0..self.core.p).map(|i| self.d_core[(i, i)]).collect();
        eigenvalues.resize(self.core.p + self.core.q, Complex64::new(0.0, 0.0));
        eigenvalues.sort_by(|x, y| {
            x.re.partial_cmp(&y.re)
                .unwrap()
                .then(x.im.partial_cmp(&y.im).unwrap())
        });
        Spectrum { eigenvalues }
    }

    /// The eigenvalues of `X` that count as nonzero for the admissibility
    /// clauses.
    pub fn nonzero_ds(&self) -> Vec<Complex64> {
        let scale = self
            .x_spectrum()
            .eigenvalues
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
            .max(1.0);
        let cut = default_rank_tol(self.dim()) * scale;
        (0..self.core.p)
            .map(|i| self.d_core[(i, i)])
            .filter(|d| d.norm() > cut)
            .collect()
    }
}

/// Time-advance matrices for one separated mode.
#[derive(Debug, Clone)]
pub struct ModePropagators {
    /// Mode index `l` (1-based, matching the eigenvalue ordering).
    pub mode: usize,
    /// `rho = -r^2 lambda_l`.
    pub rho: f64,
    pub z0: ComplexMatrix,
    pub z1: ComplexMatrix,
}

/// Search the deterministic candidate list for a shift making
/// `gamma E + A` invertible (1-norm condition estimate below `cond_max`).
pub fn find_gamma(e: &ComplexMatrix, a: &ComplexMatrix, cond_max: f64) -> Result<Complex64> {
    let m = e.require_square()?;
    if a.rows() != m || a.cols() != m {
        return Err(Error::DimensionMismatch(format!(
            "E is {m}x{m} but A is {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    let mut scale = a.norm_one() / e.norm_one().max(f64::MIN_POSITIVE);
    if scale == 0.0 || !scale.is_finite() {
        scale = 1.0;
    }
    for cand in GAMMA_CANDIDATES {
        let gamma = cand * scale;
        let shifted = e.scale(gamma).add(a);
        if cond_one(&shifted) < cond_max {
            return Ok(gamma);
        }
    }
    Err(Error::SingularPencil)
}

/// Form the regularized pencil for a given shift.
pub fn regularize(
    e: &ComplexMatrix,
    a: &ComplexMatrix,
    gamma: Complex64,
) -> Result<RegularizedPencil> {
    let m = e.require_square()?;
    let shifted = e.scale(gamma).add(a);
    let inv = invert(&shifted).map_err(|_| {
        Error::Singular(String::from(
            "gamma E + A is not invertible for the given gamma",
        ))
    })?;
    let ehat = inv.mul(e);
    let ahat = inv.mul(a);
    let core = core_nilpotent(&ehat, default_rank_tol(m))?;
    let ehat_d = drazin_from_decomposition(&core)?;
    let projector = ehat.mul(&ehat_d);
    let c_inv = invert_upper_triangular(&core.c)?;
    let mut d_core = c_inv;
    for i in 0..core.p {
        d_core[(i, i)] -= gamma;
    }
    Ok(RegularizedPencil {
        gamma,
        ehat,
        ahat,
        ehat_d,
        projector,
        core,
        d_core,
    })
}

/// Outcome of the trivial-solution test on the spectrum of `Ehat^D Ahat`.
#[derive(Debug, Clone)]
pub struct Condition45 {
    /// True when some eigenvalue has modulus above tolerance; when false the
    /// separated construction only produces the zero solution.
    pub ok: bool,
    pub spectrum: Spectrum,
}

pub fn check_condition_45(rp: &RegularizedPencil, tol: f64) -> Condition45 {
    let spectrum = rp.x_spectrum();
    let scale = rp.x_full().norm_one().max(1.0);
    let ok = spectrum.eigenvalues.iter().any(|z| z.norm() > tol * scale);
    Condition45 { ok, spectrum }
}

/// Per-mode admissibility of `rho`: the invertibility clause
/// `|rho d| |1 + rho d / 4| > tol` for every nonzero `d`, and the magnitude
/// bound `|rho| <= lambda_max r^2 + tol`.
#[derive(Debug, Clone)]
pub struct RhoAdmissibility {
    pub ok: bool,
    pub reasons: Vec<String>,
}

pub fn rho_admissible(
    rho: f64,
    rp: &RegularizedPencil,
    lambda_max: f64,
    r: f64,
    tol: f64,
) -> RhoAdmissibility {
    let mut reasons = Vec::new();
    for d in rp.nonzero_ds() {
        let rd = d * rho;
        let clause = rd.norm() * (Complex64::new(1.0, 0.0) + rd / 4.0).norm();
        if clause <= tol {
            reasons.push(format!(
                "invertibility clause fails at d = {:.6e}{:+.6e}i: |rho d||1 + rho d/4| = {clause:.3e}",
                d.re, d.im
            ));
        }
    }
    if rho.abs() > lambda_max * r * r + tol {
        reasons.push(format!(
            "|rho| = {:.6e} exceeds lambda_max * r^2 = {:.6e}",
            rho.abs(),
            lambda_max * r * r
        ));
    }
    RhoAdmissibility {
        ok: reasons.is_empty(),
        reasons,
    }
}

/// True when the invertibility clause (the part of admissibility that the
/// propagator construction itself needs) holds for `rho`.
fn rho_invertibility_ok(rho: f64, rp: &RegularizedPencil, tol: f64) -> bool {
    rp.nonzero_ds().iter().all(|d| {
        let rd = d * rho;
        rd.norm() * (Complex64::new(1.0, 0.0) + rd / 4.0).norm() > tol
    })
}

/// Build the propagators without the admissibility gate. Degenerate modes
/// (rho = 0) yield `Z0 = Z1 = Ehat Ehat^D` exactly.
pub(crate) fn propagators_from_rho(
    rp: &RegularizedPencil,
    mode: usize,
    rho: f64,
) -> Result<ModePropagators> {
    let p = rp.core.p;
    let q = rp.core.q;
    // B = I + rho/2 D on the core block, upper triangular
    let mut b = ComplexMatrix::identity(p);
    for i in 0..p {
        for j in i..p {
            b[(i, j)] += rp.d_core[(i, j)] * (rho / 2.0);
        }
    }
    let arg = b.mul(&b).sub(&ComplexMatrix::identity(p));
    let root = crate::matfun::principal_sqrt(&arg)?;
    let p_plus = b.add(&root);
    let p_minus = b.sub(&root);
    let zq = ComplexMatrix::zeros(q, q);
    let z0 = rp.core.assemble(&p_plus, &zq);
    let z1 = rp.core.assemble(&p_minus, &zq);
    Ok(ModePropagators { mode, rho, z0, z1 })
}

/// Propagators for the mode with eigenvalue `lambda_l` at mesh ratio
/// `r = k/h`: `rho = -r^2 lambda_l`. Fails when the invertibility clause of
/// admissibility is violated (in particular for `rho = 0`).
pub fn build_propagators(
    rp: &RegularizedPencil,
    mode: usize,
    lambda_l: f64,
    r: f64,
) -> Result<ModePropagators> {
    let rho = -r * r * lambda_l;
    if !rho_invertibility_ok(rho, rp, 1e-12) {
        return Err(Error::Precondition(format!(
            "rho = {rho:.6e} violates the invertibility clause for mode {mode}"
        )));
    }
    propagators_from_rho(rp, mode, rho)
}

/// General solution of the singular matrix difference equation for the given
/// free vectors: `G(j) = Z0^j P l1 + Z1^j P l2`, `j = 0..=j_max`.
pub fn solve_matrix_difference(
    rp: &RegularizedPencil,
    rho: f64,
    l1: &[Complex64],
    l2: &[Complex64],
    j_max: usize,
) -> Result<Vec<CVector>> {
    if !rho_invertibility_ok(rho, rp, 1e-12) {
        return Err(Error::Precondition(format!(
            "rho = {rho:.6e} violates the invertibility clause"
        )));
    }
    let mp = propagators_from_rho(rp, 0, rho)?;
    let mut a = rp.projector.mul_vec(l1);
    let mut b = rp.projector.mul_vec(l2);
    let mut out = Vec::with_capacity(j_max + 1);
    for _ in 0..=j_max {
        out.push(vec_add(&a, &b));
        a = mp.z0.mul_vec(&a);
        b = mp.z1.mul_vec(&b);
    }
    Ok(out)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::mat::vec_norm_one;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// The worked 3x3 example: E with one zero row, A diagonal singular.
    pub(crate) fn example_pair() -> (ComplexMatrix, ComplexMatrix) {
        let e = ComplexMatrix::from_real_rows(&[
            vec![1.0, 0.0, 1.0],
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, 0.0],
        ])
        .unwrap();
        let a = ComplexMatrix::from_real_rows(&[
            vec![0.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, 1.0],
        ])
        .unwrap();
        (e, a)
    }

    #[test]
    fn find_gamma_trivial_and_singular() {
        let id = ComplexMatrix::identity(2);
        let g = find_gamma(&id, &id, 1e8).unwrap();
        assert!((g - c(1.0, 0.0)).norm() < 1e-14);

        let z = ComplexMatrix::zeros(2, 2);
        assert!(matches!(
            find_gamma(&z, &z, 1e8),
            Err(Error::SingularPencil)
        ));
    }

    #[test]
    fn regularize_nonsingular_path_gives_full_projector() {
        // invertible E: the projector must be the identity
        let e = ComplexMatrix::from_real_rows(&[vec![2.0, 0.5], vec![-0.25, 1.5]]).unwrap();
        let a = ComplexMatrix::from_real_rows(&[vec![1.0, -1.0], vec![0.5, 3.0]]).unwrap();
        let gamma = find_gamma(&e, &a, 1e8).unwrap();
        let rp = regularize(&e, &a, gamma).unwrap();
        assert!(rp.projector.sub(&ComplexMatrix::identity(2)).norm_one() < 1e-10);
        assert_eq!(rp.core.q, 0);
    }

    #[test]
    fn regularize_matches_worked_example() {
        let (e, a) = example_pair();
        let gamma = find_gamma(&e, &a, 1e8).unwrap();
        assert!((gamma - c(1.0, 0.0)).norm() < 1e-14);
        let rp = regularize(&e, &a, gamma).unwrap();

        let ehat = ComplexMatrix::from_real_rows(&[
            vec![1.0, 0.0, 1.0],
            vec![0.0, 0.5, 0.0],
            vec![0.0, 0.0, 0.0],
        ])
        .unwrap();
        let ahat = ComplexMatrix::from_real_rows(&[
            vec![0.0, 0.0, -1.0],
            vec![0.0, 0.5, 0.0],
            vec![0.0, 0.0, 1.0],
        ])
        .unwrap();
        let ehat_d = ComplexMatrix::from_real_rows(&[
            vec![1.0, 0.0, 1.0],
            vec![0.0, 2.0, 0.0],
            vec![0.0, 0.0, 0.0],
        ])
        .unwrap();
        let projector = ComplexMatrix::from_real_rows(&[
            vec![1.0, 0.0, 1.0],
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, 0.0],
        ])
        .unwrap();
        assert!(rp.ehat.sub(&ehat).norm_one() < 1e-12);
        assert!(rp.ahat.sub(&ahat).norm_one() < 1e-12);
        assert!(rp.ehat_d.sub(&ehat_d).norm_one() < 1e-12);
        assert!(rp.projector.sub(&projector).norm_one() < 1e-12);

        // X = diag(0, 1, 0)
        let x = rp.x_full();
        let x_expect = ComplexMatrix::diag(&[c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
        assert!(x.sub(&x_expect).norm_one() < 1e-12);

        // projector invariants
        let p2 = rp.projector.mul(&rp.projector);
        assert!(p2.sub(&rp.projector).norm_one() < 1e-12);
        assert!(rp.projector.mul(&x).sub(&x.mul(&rp.projector)).norm_one() < 1e-12);
        // Ehat * gamma + Ahat = I
        let ident = rp.ehat.scale(rp.gamma).add(&rp.ahat);
        assert!(ident.sub(&ComplexMatrix::identity(3)).norm_one() < 1e-12);
    }

    #[test]
    fn condition_45_cases() {
        let (e, a) = example_pair();
        let rp = regularize(&e, &a, c(1.0, 0.0)).unwrap();
        let c45 = check_condition_45(&rp, 1e-8);
        assert!(c45.ok);
        assert_eq!(c45.spectrum.eigenvalues.len(), 3);

        // A = 0 makes X = 0: only the trivial solution remains
        let id = ComplexMatrix::identity(2);
        let z = ComplexMatrix::zeros(2, 2);
        let gamma = find_gamma(&id, &z, 1e8).unwrap();
        let rp0 = regularize(&id, &z, gamma).unwrap();
        assert!(!check_condition_45(&rp0, 1e-8).ok);

        // invertible path: Ehat^D Ahat = A, not nilpotent
        let rp1 = regularize(&id, &id, c(1.0, 0.0)).unwrap();
        assert!(check_condition_45(&rp1, 1e-8).ok);
    }

    #[test]
    fn scalar_propagators_have_unit_modulus() {
        let one = ComplexMatrix::identity(1);
        let rp = regularize(&one, &one, c(1.0, 0.0)).unwrap();
        // lambda r^2 = 1 => rho = -1, (1 + rho/2)^2 = 0.25 < 1
        let mp = build_propagators(&rp, 1, 1.0, 1.0).unwrap();
        let z0 = mp.z0[(0, 0)];
        let z1 = mp.z1[(0, 0)];
        let root = num_traits::Float::sqrt(0.75_f64);
        assert!((z0 - c(0.5, root)).norm() < 1e-14);
        assert!((z1 - c(0.5, -root)).norm() < 1e-14);
        assert!((z0.norm() - 1.0).abs() < 1e-14);
        assert!((z1.norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn rho_zero_is_rejected_by_checked_builder() {
        let (e, a) = example_pair();
        let rp = regularize(&e, &a, c(1.0, 0.0)).unwrap();
        assert!(matches!(
            build_propagators(&rp, 1, 0.0, 0.5),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn propagator_product_telescopes_to_projector() {
        let (e, a) = example_pair();
        let rp = regularize(&e, &a, c(1.0, 0.0)).unwrap();
        let mp = build_propagators(&rp, 1, 0.7, 0.5).unwrap();
        let prod = mp.z0.mul(&mp.z1);
        assert!(prod.sub(&rp.projector).norm_one() < 1e-12);
        let comm = mp.z0.mul(&mp.z1).sub(&mp.z1.mul(&mp.z0));
        assert!(comm.norm_one() < 1e-12);
        // Z P = Z
        assert!(mp.z0.mul(&rp.projector).sub(&mp.z0).norm_one() < 1e-12);
    }

    #[test]
    fn rho_admissibility_clauses() {
        let (e, a) = example_pair();
        let rp = regularize(&e, &a, c(1.0, 0.0)).unwrap();
        // the only nonzero d is 1
        let lam_max = 4.0;
        let r = 0.5;
        let ok = rho_admissible(-r * r * 1.0, &rp, lam_max, r, 1e-8);
        assert!(ok.ok, "{:?}", ok.reasons);
        let zero = rho_admissible(0.0, &rp, lam_max, r, 1e-8);
        assert!(!zero.ok);
        // rho d = -4 kills the second factor
        let bad = rho_admissible(-4.0, &rp, 16.0 / (r * r), r, 1e-8);
        assert!(!bad.ok);
        assert!(bad.reasons[0].contains("invertibility"));
    }

    #[test]
    fn difference_equation_residual_vanishes() {
        let (e, a) = example_pair();
        let rp = regularize(&e, &a, c(1.0, 0.0)).unwrap();
        let rho = -0.35;
        let l1 = vec![c(0.3, -0.2), c(1.0, 0.5), c(-0.7, 0.0)];
        let l2 = vec![c(-1.0, 0.1), c(0.2, 0.0), c(0.4, -0.9)];
        let g = solve_matrix_difference(&rp, rho, &l1, &l2, 12).unwrap();
        let two_e_rho_a = e.scale(c(2.0, 0.0)).add(&a.scale(c(rho, 0.0)));
        for j in 1..12 {
            let r1 = e.mul_vec(&g[j + 1]);
            let r2 = two_e_rho_a.mul_vec(&g[j]);
            let r3 = e.mul_vec(&g[j - 1]);
            let res: f64 = (0..3).map(|i| (r1[i] - r2[i] + r3[i]).norm()).sum();
            assert!(res < 1e-12, "step {j} residual {res}");
        }
        // nilpotent-branch component stays zero: (I - P) G(j) = 0
        let ip = ComplexMatrix::identity(3).sub(&rp.projector);
        for gj in &g {
            assert!(vec_norm_one(&ip.mul_vec(gj)) < 1e-12);
        }

        let zeros =
            solve_matrix_difference(&rp, rho, &[c(0.0, 0.0); 3], &[c(0.0, 0.0); 3], 5).unwrap();
        assert!(zeros.iter().all(|v| vec_norm_one(v) == 0.0));
    }

    #[test]
    fn nonsingular_reduction_matches_direct_recurrence() {
        // invertible E: compare against naive two-term stepping with E^-1
        let e = ComplexMatrix::from_real_rows(&[vec![1.5, 0.25], vec![0.0, 2.0]]).unwrap();
        let a = ComplexMatrix::from_real_rows(&[vec![1.0, 0.5], vec![-0.25, 1.25]]).unwrap();
        let gamma = find_gamma(&e, &a, 1e8).unwrap();
        let rp = regularize(&e, &a, gamma).unwrap();
        let rho = -0.2;
        let l1 = vec![c(1.0, 0.0), c(0.0, 1.0)];
        let l2 = vec![c(0.5, -0.5), c(1.0, 0.0)];
        let g = solve_matrix_difference(&rp, rho, &l1, &l2, 10).unwrap();

        let e_inv = invert(&e).unwrap();
        let two_e_rho_a = e.scale(c(2.0, 0.0)).add(&a.scale(c(rho, 0.0)));
        let mut prev = g[0].clone();
        let mut cur = g[1].clone();
        for j in 1..10 {
            let rhs = crate::mat::vec_sub(&two_e_rho_a.mul_vec(&cur), &e.mul_vec(&prev));
            let next = e_inv.mul_vec(&rhs);
            let diff: f64 = (0..2).map(|i| (next[i] - g[j + 1][i]).norm()).sum();
            assert!(diff < 1e-9, "step {j} diff {diff}");
            prev = cur;
            cur = next;
        }
    }
}
