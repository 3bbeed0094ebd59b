//! Command implementations shared by the binary and the integration tests.

use std::path::Path;
use std::time::Instant;

use descwave::hypotheses::validate_all_with;
use descwave::mat::vec_norm_one;
use descwave::solver::{assemble_with, scheme_residual, stability_sweep_with};

use crate::classify;
use crate::examples::builtin;
use crate::report::{atomic_write, solution_csv, sweep_csv, sweep_plot_script, RunReport};
use crate::spec::ProblemSpec;
use crate::Outcome;

/// A command failure carrying the exit classification.
#[derive(Debug)]
pub struct Failure {
    pub outcome: Outcome,
    pub message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure {
            outcome: Outcome::InputError,
            message: message.into(),
        }
    }
}

impl From<descwave::Error> for Failure {
    fn from(e: descwave::Error) -> Self {
        Failure {
            outcome: classify(&e),
            message: e.to_string(),
        }
    }
}

/// A loaded spec plus the exact bytes that identify it in reports.
pub struct RunInput {
    pub spec: ProblemSpec,
    pub bytes: Vec<u8>,
    pub label: String,
}

/// Load a spec from a file or a built-in example (exactly one must be given).
pub fn load_input(spec_path: Option<&Path>, example: Option<&str>) -> Result<RunInput, Failure> {
    match (spec_path, example) {
        (Some(path), None) => {
            let bytes = std::fs::read(path)
                .map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))?;
            let spec: ProblemSpec = serde_json::from_slice(&bytes)
                .map_err(|e| Failure::input(format!("cannot parse {}: {e}", path.display())))?;
            Ok(RunInput {
                spec,
                bytes,
                label: path.display().to_string(),
            })
        }
        (None, Some(name)) => {
            let spec = builtin(name)?;
            let bytes = serde_json::to_vec_pretty(&spec).expect("builtin spec serializes");
            Ok(RunInput {
                spec,
                bytes,
                label: format!("example:{name}"),
            })
        }
        _ => Err(Failure::input(
            "provide exactly one of --spec PATH or --example NAME",
        )),
    }
}

fn write_report(report: &mut RunReport, started: Instant, out_dir: &Path) -> Result<(), Failure> {
    report.timing_ms = started.elapsed().as_millis();
    report
        .write(out_dir)
        .map_err(|e| Failure::input(format!("cannot write report: {e}")))?;
    Ok(())
}

/// Validate every solvability hypothesis and write `report.json`.
pub fn cmd_check(
    input: &RunInput,
    out_dir: &Path,
    tol_override: Option<f64>,
) -> Result<Outcome, Failure> {
    let started = Instant::now();
    let built = input.spec.build(tol_override)?;
    let validation = validate_all_with(&built.problem, &built.pencil, &built.tols)?;
    let mut report = RunReport::new("check", &input.bytes);
    report.set_validation(&validation);
    let pass = validation.overall_pass();
    report.overall = match (pass, report.warnings.is_empty()) {
        (true, true) => "pass".into(),
        (true, false) => "pass-with-warnings".into(),
        (false, _) => "fail".into(),
    };
    write_report(&mut report, started, out_dir)?;
    Ok(if pass {
        Outcome::Pass
    } else {
        Outcome::HypothesisFailure
    })
}

/// Validate, assemble, evaluate residuals, and write the solution grid.
pub fn cmd_solve(
    input: &RunInput,
    out_dir: &Path,
    tol_override: Option<f64>,
    force: bool,
) -> Result<Outcome, Failure> {
    let started = Instant::now();
    let built = input.spec.build(tol_override)?;
    let validation = validate_all_with(&built.problem, &built.pencil, &built.tols)?;
    let mut report = RunReport::new("solve", &input.bytes);
    report.set_validation(&validation);
    let hypotheses_pass = validation.overall_pass();
    if !hypotheses_pass && !force {
        report.overall = "fail".into();
        write_report(&mut report, started, out_dir)?;
        return Ok(Outcome::HypothesisFailure);
    }

    let sol = assemble_with(
        &built.problem,
        &built.pencil,
        &built.eigensystem,
        &built.tols,
    )?;
    let res = scheme_residual(&sol.u, &built.problem);
    let data_scale = built
        .problem
        .f
        .iter()
        .chain(built.problem.gdata.iter())
        .map(|v| vec_norm_one(v))
        .fold(0.0, f64::max);
    let tolerance = built.tols.residual_tol * (1.0 + data_scale);
    let residuals_pass = res.max() <= tolerance;
    report.set_residuals(&res, tolerance, residuals_pass);

    let csv = solution_csv(&sol, built.problem.m());
    atomic_write(&out_dir.join("solution.csv"), csv.as_bytes())
        .map_err(|e| Failure::input(format!("cannot write solution.csv: {e}")))?;

    let pass = residuals_pass && (hypotheses_pass || force);
    report.overall = match (pass, report.warnings.is_empty()) {
        (true, true) => "pass".into(),
        (true, false) => "pass-with-warnings".into(),
        (false, _) => "fail".into(),
    };
    write_report(&mut report, started, out_dir)?;
    Ok(if pass {
        Outcome::Pass
    } else {
        Outcome::HypothesisFailure
    })
}

/// Run the stability sweep and write the table, the plot script, and the
/// report.
pub fn cmd_sweep(
    input: &RunInput,
    out_dir: &Path,
    tol_override: Option<f64>,
    halvings_override: Option<usize>,
) -> Result<Outcome, Failure> {
    let started = Instant::now();
    let built = input.spec.build(tol_override)?;
    let halvings = halvings_override.unwrap_or(input.spec.options.halvings);
    let sweep = stability_sweep_with(
        &built.problem,
        &built.pencil,
        &built.eigensystem,
        halvings,
        &built.tols,
    );

    atomic_write(&out_dir.join("sweep.csv"), sweep_csv(&sweep).as_bytes())
        .map_err(|e| Failure::input(format!("cannot write sweep.csv: {e}")))?;
    atomic_write(
        &out_dir.join("sweep_plot.gp"),
        sweep_plot_script().as_bytes(),
    )
    .map_err(|e| Failure::input(format!("cannot write sweep_plot.gp: {e}")))?;

    let mut report = RunReport::new("sweep", &input.bytes);
    report.set_sweep(&sweep);
    report.overall = if sweep.bounded {
        "pass".into()
    } else {
        "fail".into()
    };
    write_report(&mut report, started, out_dir)?;
    Ok(if sweep.bounded {
        Outcome::Pass
    } else {
        Outcome::HypothesisFailure
    })
}

/// Write a built-in example spec as `<name>.json` under `out_dir`.
pub fn cmd_example(name: &str, out_dir: &Path) -> Result<std::path::PathBuf, Failure> {
    let spec = builtin(name)?;
    let body = serde_json::to_string_pretty(&spec).expect("builtin spec serializes");
    let path = out_dir.join(format!("{name}.json"));
    atomic_write(&path, body.as_bytes())
        .map_err(|e| Failure::input(format!("cannot write {}: {e}", path.display())))?;
    Ok(path)
}
