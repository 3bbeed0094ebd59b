//! Discrete solutions of strongly coupled hyperbolic matrix systems with a
//! singular leading coefficient.
//!
//! This crate constructs, validates, and verifies stable solutions of the
//! finite-difference scheme for `E u_tt = A u_xx` on `[0,1] x [0,T]` with
//! strongly coupled boundary conditions, where `E` may be singular. The
//! construction regularizes the pair `(E, A)` with a shift `gamma`, splits
//! space and time by a discrete separation of variables, expands the initial
//! data over a discrete Sturm-Liouville eigenbasis, and advances each mode
//! with a pair of propagator matrices built from a principal matrix square
//! root of functions of the Drazin inverse.
//!
//! The crate is `no_std` compatible (with `alloc`); all IO, file formats and
//! the command line front end live in the companion `descwave-cli` crate.
//!
//! Module map:
//! - [`mat`]: dense complex matrices and vectors, norms, arithmetic.
//! - [`matfun`]: generalized inverses (Drazin, group, Moore-Penrose), the
//!   core-nilpotent decomposition, principal square root, spectra.
//! - [`sturm`]: the discrete Sturm-Liouville eigenproblem and expansions.
//! - [`pencil`]: pencil regularization and the per-mode propagators.
//! - [`hypotheses`]: machine-checkable validation of every solvability
//!   hypothesis for a concrete problem instance.
//! - [`solver`]: discretization, mode coefficients, solution assembly,
//!   residual evaluation and the stability sweep.
//! - [`oracle`]: independent brute-force verifiers (direct time stepping,
//!   Jacobi eigensolver, limit-based Drazin construction).

#![cfg_attr(not(any(test, feature = "std")), no_std)]
// dense kernels index rows and columns on purpose
#![allow(clippy::needless_range_loop)]

extern crate alloc;

pub mod error;
pub mod hypotheses;
mod lu;
pub mod mat;
pub mod matfun;
pub mod oracle;
pub mod pencil;
mod schur;
pub mod solver;
pub mod sturm;
mod svd;

pub use error::Error;
pub use mat::{CVector, ComplexMatrix};
pub use num_complex::Complex64;

/// Tolerance bundle shared by the validation and solver pipelines.
///
/// All residual thresholds are relative to the scale of the data they check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Relative numerical-rank threshold (scaled by the matrix norm).
    pub rank_tol: f64,
    /// Relative residual threshold for hypothesis and scheme checks.
    pub residual_tol: f64,
    /// Largest acceptable 1-norm condition estimate for `gamma E + A`.
    pub cond_max: f64,
    /// Allowed growth ratio between successive stability-sweep rows.
    pub eps_growth: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            rank_tol: 1e-12,
            residual_tol: 1e-8,
            cond_max: 1e8,
            eps_growth: 0.1,
        }
    }
}

impl Tolerances {
    /// Same defaults with a different residual threshold.
    pub fn with_residual_tol(residual_tol: f64) -> Self {
        Tolerances {
            residual_tol,
            ..Tolerances::default()
        }
    }
}

pub type Result<T> = core::result::Result<T, Error>;
