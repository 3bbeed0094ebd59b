//! The problem-spec file format: a JSON document carrying the coefficient
//! matrices, boundary operators, grid geometry, initial data (explicit grids
//! or named generators), and solver options.

use descwave::hypotheses::BoundaryConditions;
use descwave::pencil::{find_gamma, regularize, RegularizedPencil};
use descwave::solver::{synthesize_through_modes, MixedProblem};
use descwave::sturm::{solve_sl, SLEigensystem, SLProblem};
use descwave::Complex64;
use descwave::{CVector, ComplexMatrix, Error, Tolerances};
use serde::{Deserialize, Serialize};

/// `[re, im]` pair.
pub type Cx = [f64; 2];

/// Matrix as nested arrays of `[re, im]` pairs, row major.
pub type MatrixSpec = Vec<Vec<Cx>>;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ProblemSpec {
    pub m: usize,
    #[serde(rename = "N")]
    pub n: usize,
    pub k: f64,
    #[serde(rename = "T")]
    pub t: f64,
    pub alpha: f64,
    pub beta: f64,
    #[serde(rename = "E")]
    pub e: MatrixSpec,
    #[serde(rename = "A")]
    pub a: MatrixSpec,
    #[serde(rename = "A1")]
    pub a1: MatrixSpec,
    #[serde(rename = "A2")]
    pub a2: MatrixSpec,
    #[serde(rename = "B1")]
    pub b1: MatrixSpec,
    #[serde(rename = "B2")]
    pub b2: MatrixSpec,
    #[serde(rename = "F")]
    pub f: DataSpec,
    #[serde(rename = "G")]
    pub g: DataSpec,
    #[serde(default)]
    pub options: Options,
}

/// Initial data: an explicit `(N+1) x m` grid of `[re, im]` pairs, or a named
/// built-in generator.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum DataSpec {
    Grid { grid: Vec<Vec<Cx>> },
    Generator { generator: GeneratorSpec },
}

/// Built-in data generators.
///
/// * `zero`: the zero grid.
/// * `sin`: component `p` is `amplitude_p * sin(frequency_p * pi * x)`
///   sampled at the nodes.
/// * `sin-admissible`: the `sin` samples re-synthesized through the
///   boundary-extended eigenmodes that are strictly admissible at the base
///   mesh ratio; data then lies exactly in the span the solution formula can
///   represent (inadmissible-mode components are dropped).
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct GeneratorSpec {
    pub name: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub components: Vec<ComponentSpec>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ComponentSpec {
    pub amplitude: f64,
    pub frequency: f64,
}

/// Shift selection: automatic candidate search or a fixed complex value.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum GammaSpec {
    Auto(String),
    Fixed(Cx),
}

impl Default for GammaSpec {
    fn default() -> Self {
        GammaSpec::Auto("auto".into())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct Options {
    pub gamma: GammaSpec,
    pub rank_tol: f64,
    pub residual_tol: f64,
    pub eps_growth: f64,
    pub halvings: usize,
}

impl Default for Options {
    fn default() -> Self {
        let t = Tolerances::default();
        Options {
            gamma: GammaSpec::default(),
            rank_tol: t.rank_tol,
            residual_tol: t.residual_tol,
            eps_growth: t.eps_growth,
            halvings: 5,
        }
    }
}

impl Options {
    pub fn tolerances(&self, tol_override: Option<f64>) -> Result<Tolerances, Error> {
        let residual_tol = tol_override.unwrap_or(self.residual_tol);
        let positive = |x: f64| x.is_finite() && x > 0.0;
        if !positive(self.rank_tol) || !positive(residual_tol) || !positive(self.eps_growth) {
            return Err(Error::Precondition("tolerances must be positive".into()));
        }
        Ok(Tolerances {
            rank_tol: self.rank_tol,
            residual_tol,
            eps_growth: self.eps_growth,
            ..Tolerances::default()
        })
    }
}

fn parse_matrix(name: &str, m: usize, rows: &MatrixSpec) -> Result<ComplexMatrix, Error> {
    if rows.len() != m || rows.iter().any(|r| r.len() != m) {
        return Err(Error::DimensionMismatch(format!("{name} must be {m}x{m}")));
    }
    let complex: Vec<Vec<Complex64>> = rows
        .iter()
        .map(|r| r.iter().map(|&[re, im]| Complex64::new(re, im)).collect())
        .collect();
    ComplexMatrix::from_rows(&complex)
}

/// Everything materialized from a spec: the problem, the regularized pencil
/// under the requested shift policy, and the eigensystem.
pub struct BuiltProblem {
    pub problem: MixedProblem,
    pub pencil: RegularizedPencil,
    pub eigensystem: SLEigensystem,
    pub tols: Tolerances,
}

impl ProblemSpec {
    /// Materialize the spec: parse matrices, resolve the shift, solve the
    /// spatial eigenproblem, and evaluate data generators.
    pub fn build(&self, tol_override: Option<f64>) -> Result<BuiltProblem, Error> {
        let m = self.m;
        let tols = self.options.tolerances(tol_override)?;
        let e = parse_matrix("E", m, &self.e)?;
        let a = parse_matrix("A", m, &self.a)?;
        let bc = BoundaryConditions {
            a1: parse_matrix("A1", m, &self.a1)?,
            a2: parse_matrix("A2", m, &self.a2)?,
            b1: parse_matrix("B1", m, &self.b1)?,
            b2: parse_matrix("B2", m, &self.b2)?,
        };

        let gamma = match &self.options.gamma {
            GammaSpec::Auto(word) if word == "auto" => find_gamma(&e, &a, tols.cond_max)?,
            GammaSpec::Auto(word) => {
                return Err(Error::Precondition(format!(
                    "gamma must be \"auto\" or an [re, im] pair, got \"{word}\""
                )))
            }
            GammaSpec::Fixed([re, im]) => Complex64::new(*re, *im),
        };
        let pencil = regularize(&e, &a, gamma)?;
        let sl = SLProblem::new(self.n, self.alpha, self.beta)?;
        let eigensystem = solve_sl(&sl)?;

        let r = self.k * self.n as f64;
        let f = self
            .f
            .materialize("F", m, self.n, &eigensystem, &pencil, r, &tols)?;
        let g = self
            .g
            .materialize("G", m, self.n, &eigensystem, &pencil, r, &tols)?;

        let problem = MixedProblem::new(
            e, a, bc, self.alpha, self.beta, self.n, self.k, self.t, f, g,
        )?;
        Ok(BuiltProblem {
            problem,
            pencil,
            eigensystem,
            tols,
        })
    }
}

impl DataSpec {
    #[allow(clippy::too_many_arguments)]
    fn materialize(
        &self,
        name: &str,
        m: usize,
        n: usize,
        es: &SLEigensystem,
        rp: &RegularizedPencil,
        r: f64,
        tols: &Tolerances,
    ) -> Result<Vec<CVector>, Error> {
        match self {
            DataSpec::Grid { grid } => {
                if grid.len() != n + 1 || grid.iter().any(|row| row.len() != m) {
                    return Err(Error::DimensionMismatch(format!(
                        "{name} grid must be (N+1) x m = {} x {m}",
                        n + 1
                    )));
                }
                Ok(grid
                    .iter()
                    .map(|row| row.iter().map(|&[re, im]| Complex64::new(re, im)).collect())
                    .collect())
            }
            DataSpec::Generator { generator } => {
                let sample_sin = |components: &[ComponentSpec]| -> Result<Vec<CVector>, Error> {
                    if components.len() != m {
                        return Err(Error::DimensionMismatch(format!(
                            "{name} generator needs {m} components, got {}",
                            components.len()
                        )));
                    }
                    Ok((0..=n)
                        .map(|i| {
                            let x = i as f64 / n as f64;
                            components
                                .iter()
                                .map(|c| {
                                    Complex64::new(
                                        c.amplitude
                                            * (c.frequency * core::f64::consts::PI * x).sin(),
                                        0.0,
                                    )
                                })
                                .collect()
                        })
                        .collect())
                };
                match generator.name.as_str() {
                    "zero" => Ok(vec![vec![Complex64::new(0.0, 0.0); m]; n + 1]),
                    "sin" => sample_sin(&generator.components),
                    "sin-admissible" => {
                        let raw = sample_sin(&generator.components)?;
                        synthesize_through_modes(&raw, es, rp, r, tols.residual_tol)
                    }
                    other => Err(Error::Precondition(format!(
                        "unknown generator \"{other}\" for {name}"
                    ))),
                }
            }
        }
    }
}
