//! Built-in example specs.

use crate::spec::{ComponentSpec, DataSpec, GeneratorSpec, MatrixSpec, Options, ProblemSpec};
use descwave::Error;

fn real(rows: &[&[f64]]) -> MatrixSpec {
    rows.iter()
        .map(|r| r.iter().map(|&x| [x, 0.0]).collect())
        .collect()
}

fn sin_admissible(components: &[(f64, f64)]) -> DataSpec {
    DataSpec::Generator {
        generator: GeneratorSpec {
            name: "sin-admissible".into(),
            components: components
                .iter()
                .map(|&(amplitude, frequency)| ComponentSpec {
                    amplitude,
                    frequency,
                })
                .collect(),
        },
    }
}

fn sin(components: &[(f64, f64)]) -> DataSpec {
    DataSpec::Generator {
        generator: GeneratorSpec {
            name: "sin".into(),
            components: components
                .iter()
                .map(|&(amplitude, frequency)| ComponentSpec {
                    amplitude,
                    frequency,
                })
                .collect(),
        },
    }
}

/// The worked singular 3x3 instance.
///
/// Free scalars fixed as eps = gamma = delta = sigma = 1, mu = 2, eta = 1,
/// B1 = I, the `a` block the identity pattern, b = (1,0,0), c = 0;
/// boundary scalars alpha = mu, beta = eta. With these values the coupling
/// matrix has rank 1 < 3 and all solvability hypotheses hold.
///
/// Two intrinsic degeneracies shape the data choice. First, alpha = beta + 1
/// makes lambda = 0 a Sturm-Liouville eigenvalue (eigenfunction a + b*i), so
/// that mode is inadmissible and must carry no data. Second, the first
/// equation row has zero wave speed (E row couples u1'' to nothing), so the
/// first solution component is static and its velocity data must vanish:
/// g1 = 0. The sine profiles are therefore synthesized through the
/// admissible eigenmodes (`sin-admissible`).
fn paper_4_2() -> ProblemSpec {
    ProblemSpec {
        m: 3,
        n: 8,
        k: 0.0625,
        t: 1.0,
        alpha: 2.0,
        beta: 1.0,
        e: real(&[&[1.0, 0.0, 1.0], &[0.0, 1.0, 0.0], &[0.0, 0.0, 0.0]]),
        a: real(&[&[0.0, 0.0, 0.0], &[0.0, 1.0, 0.0], &[0.0, 0.0, 1.0]]),
        a1: real(&[&[1.0, 0.0, 1.0], &[0.0, 1.0, 0.0], &[0.0, 0.0, 0.0]]),
        a2: real(&[&[2.0, 0.0, 0.0], &[0.0, 2.0, 0.0], &[0.0, 0.0, 0.0]]),
        b1: real(&[&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0], &[0.0, 0.0, 1.0]]),
        b2: real(&[&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0], &[0.0, 0.0, 1.0]]),
        f: sin_admissible(&[(1.0, 1.0), (0.5, 2.0), (0.0, 0.0)]),
        g: sin_admissible(&[(0.0, 0.0), (1.0, 3.0), (0.0, 0.0)]),
        options: Options::default(),
    }
}

/// Stable scalar wave instance with Dirichlet-like boundary scalars.
fn scalar_stable() -> ProblemSpec {
    ProblemSpec {
        m: 1,
        n: 8,
        k: 1.0 / 24.0,
        t: 1.0,
        alpha: 0.0,
        beta: 0.0,
        e: real(&[&[1.0]]),
        a: real(&[&[1.0]]),
        a1: real(&[&[1.0]]),
        a2: real(&[&[0.0]]),
        b1: real(&[&[1.0]]),
        b2: real(&[&[0.0]]),
        f: sin(&[(1.0, 1.0)]),
        g: sin(&[(0.5, 2.0)]),
        options: Options::default(),
    }
}

/// Invertible-E reduction path: E = I with a symmetric positive definite A.
fn nonsingular() -> ProblemSpec {
    ProblemSpec {
        m: 3,
        n: 8,
        k: 1.0 / 64.0,
        t: 1.0,
        alpha: 0.0,
        beta: 0.0,
        e: real(&[&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0], &[0.0, 0.0, 1.0]]),
        a: real(&[&[1.5, 0.3, 0.0], &[0.3, 1.0, 0.2], &[0.0, 0.2, 2.0]]),
        a1: real(&[&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0], &[0.0, 0.0, 1.0]]),
        a2: real(&[&[0.0; 3], &[0.0; 3], &[0.0; 3]]),
        b1: real(&[&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0], &[0.0, 0.0, 1.0]]),
        b2: real(&[&[0.0; 3], &[0.0; 3], &[0.0; 3]]),
        f: sin_admissible(&[(1.0, 1.0), (0.5, 2.0), (0.25, 3.0)]),
        g: sin_admissible(&[(0.3, 2.0), (0.0, 0.0), (0.5, 1.0)]),
        options: Options::default(),
    }
}

pub const EXAMPLE_NAMES: [&str; 3] = ["paper-4-2", "scalar-stable", "nonsingular"];

/// Look up a built-in example spec by name.
pub fn builtin(name: &str) -> Result<ProblemSpec, Error> {
    match name {
        "paper-4-2" => Ok(paper_4_2()),
        "scalar-stable" => Ok(scalar_stable()),
        "nonsingular" => Ok(nonsingular()),
        other => Err(Error::Precondition(format!(
            "unknown example \"{other}\"; available: {}",
            EXAMPLE_NAMES.join(", ")
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_examples_build() {
        for name in EXAMPLE_NAMES {
            let spec = builtin(name).unwrap();
            let built = spec.build(None).unwrap_or_else(|e| panic!("{name}: {e}"));
            assert_eq!(built.problem.m(), spec.m);
        }
    }

    #[test]
    fn unknown_example_rejected() {
        assert!(builtin("missing").is_err());
    }
}
