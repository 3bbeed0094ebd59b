//! Shared generators and assertions for the integration suites.

#![allow(dead_code)]

use descwave::hypotheses::{BoundaryConditions, ValidationReport};
use descwave::matfun::moore_penrose;
use descwave::{CVector, Complex64, ComplexMatrix};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Superdiagonal magnitude for constructed nilpotent blocks: small enough
/// that the defective-cluster eigenvalue fuzz stays resolvable.
const NILPOTENT_COUPLING: f64 = 0.01;

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_unit(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

pub fn random_complex_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            m[(i, j)] = random_unit(rng);
        }
    }
    m
}

/// Well-conditioned random similarity `T = I + (0.3/m) R`.
fn random_similarity(rng: &mut ChaCha8Rng, m: usize) -> (ComplexMatrix, ComplexMatrix) {
    let r = random_complex_matrix(rng, m, m);
    let t = ComplexMatrix::identity(m).add(&r.scale(Complex64::new(0.3 / m as f64, 0.0)));
    let t_inv = moore_penrose(&t, 1e-13).expect("similarity invertible");
    (t, t_inv)
}

/// A random matrix with known Jordan structure: nonzero eigenvalues with
/// moduli in [0.7, 1.6] plus nilpotent blocks realizing the requested index.
/// Returns the matrix and its index.
pub fn random_jordan_matrix(
    rng: &mut ChaCha8Rng,
    m: usize,
    index_target: usize,
) -> (ComplexMatrix, usize) {
    let index = index_target.min(m);
    let mut q = index;
    // an extra 1-dim zero block for variety when there is room
    if index >= 1 && m - index >= 4 {
        q += 1;
    }
    let p = m - q;
    let mut j = ComplexMatrix::zeros(m, m);
    for i in 0..p {
        let modulus = rng.gen_range(0.7..1.6);
        let arg = rng.gen_range(0.0..std::f64::consts::TAU);
        j[(i, i)] = Complex64::new(modulus * arg.cos(), modulus * arg.sin());
    }
    // one Jordan block of the target size, then trivial zero blocks
    for off in 1..index {
        j[(p + off - 1, p + off)] = Complex64::new(NILPOTENT_COUPLING, 0.0);
    }
    let (t, t_inv) = random_similarity(rng, m);
    (t.mul(&j).mul(&t_inv), index)
}

/// A rank-deficient matrix plus a right-hand side in its range and one with
/// a component outside it.
pub fn random_rank_deficient_system(
    rng: &mut ChaCha8Rng,
    m: usize,
) -> (ComplexMatrix, CVector, CVector) {
    let rank = rng.gen_range(1..m);
    let b = random_complex_matrix(rng, m, rank);
    let ct = random_complex_matrix(rng, rank, m);
    let a = b.mul(&ct);
    let z: CVector = (0..m).map(|_| random_unit(rng)).collect();
    let in_range = a.mul_vec(&z);
    let pinv = moore_penrose(&a, 1e-12).expect("pinv");
    let proj_out = ComplexMatrix::identity(m).sub(&a.mul(&pinv));
    loop {
        let w: CVector = (0..m).map(|_| random_unit(rng)).collect();
        let out = proj_out.mul_vec(&w);
        let norm: f64 = out.iter().map(|x| x.norm()).sum();
        if norm > 1e-3 {
            let off_range: CVector = in_range.iter().zip(&out).map(|(x, y)| x + y).collect();
            return (a, in_range, off_range);
        }
    }
}

/// Singular `E` (one or two nilpotent dimensions) with a generic `A`.
pub fn random_singular_pencil(rng: &mut ChaCha8Rng, m: usize) -> (ComplexMatrix, ComplexMatrix) {
    let q = 1 + rng.gen_range(0..2usize.min(m - 1));
    let p = m - q;
    let mut je = ComplexMatrix::zeros(m, m);
    for i in 0..p {
        let modulus = rng.gen_range(0.5..1.5);
        let arg = rng.gen_range(0.0..std::f64::consts::TAU);
        je[(i, i)] = Complex64::new(modulus * arg.cos(), modulus * arg.sin());
    }
    if q == 2 {
        je[(p, p + 1)] = Complex64::new(NILPOTENT_COUPLING, 0.0);
    }
    let (t, t_inv) = random_similarity(rng, m);
    let e = t.mul(&je).mul(&t_inv);
    let a = random_complex_matrix(rng, m, m).add(&ComplexMatrix::identity(m));
    (e, a)
}

/// Simultaneously diagonalized pair with real positive spectra: the nonzero
/// eigenvalues of `Ehat^D Ahat` come out real positive (`a_i / e_i`), which
/// exercises the unit-modulus regime.
pub fn random_commuting_singular_pencil(
    rng: &mut ChaCha8Rng,
    m: usize,
) -> (ComplexMatrix, ComplexMatrix) {
    let q = 1;
    let p = m - q;
    let mut de = ComplexMatrix::zeros(m, m);
    let mut da = ComplexMatrix::zeros(m, m);
    for i in 0..p {
        de[(i, i)] = Complex64::new(rng.gen_range(0.5..1.5), 0.0);
        da[(i, i)] = Complex64::new(rng.gen_range(0.5..1.5), 0.0);
    }
    da[(p, p)] = Complex64::new(rng.gen_range(0.5..1.5), 0.0);
    let (t, t_inv) = random_similarity(rng, m);
    (t.mul(&de).mul(&t_inv), t.mul(&da).mul(&t_inv))
}

/// Real matrix with spectrum around [0.7, 2.0] through a mild similarity.
pub fn random_spd_like(rng: &mut ChaCha8Rng, m: usize) -> ComplexMatrix {
    let mut d = ComplexMatrix::zeros(m, m);
    for i in 0..m {
        d[(i, i)] = Complex64::new(
            0.7 + 1.3 * (i as f64 + rng.gen_range(0.0..0.9)) / m as f64,
            0.0,
        );
    }
    let mut r = ComplexMatrix::zeros(m, m);
    for i in 0..m {
        for j in 0..m {
            r[(i, j)] = Complex64::new(rng.gen_range(-1.0..1.0), 0.0);
        }
    }
    let t = ComplexMatrix::identity(m).add(&r.scale(Complex64::new(0.1, 0.0)));
    let t_inv = moore_penrose(&t, 1e-13).expect("similarity invertible");
    t.mul(&d).mul(&t_inv)
}

pub fn dirichlet_bc(m: usize) -> BoundaryConditions {
    BoundaryConditions {
        a1: ComplexMatrix::identity(m),
        a2: ComplexMatrix::zeros(m, m),
        b1: ComplexMatrix::identity(m),
        b2: ComplexMatrix::zeros(m, m),
    }
}

/// Greedy nearest-neighbour multiset matching; returns the worst distance.
pub fn greedy_multiset_match(got: &[Complex64], expected: &mut Vec<Complex64>) -> f64 {
    let mut worst = 0.0_f64;
    for z in got {
        let (idx, dist) = expected
            .iter()
            .enumerate()
            .map(|(i, w)| (i, (z - w).norm()))
            .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
            .expect("expected multiset exhausted");
        worst = worst.max(dist);
        expected.swap_remove(idx);
    }
    worst
}

/// Assert exactly one named check fails and every other entry passes.
pub fn assert_only_failure(report: &ValidationReport, name: &str) {
    for check in &report.checks {
        if check.name == name {
            assert!(!check.pass, "{name} unexpectedly passed: {check:?}");
        } else {
            assert!(
                check.pass,
                "unexpected failure in {}: {check:?}",
                check.name
            );
        }
    }
}
