//! Run reports, CSV output, and the sweep plot script. All file writes are
//! atomic (write to a temp file in the target directory, then rename).

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use descwave::hypotheses::ValidationReport;
use descwave::solver::{DiscreteSolution, SchemeResiduals, SweepResult};
use serde::Serialize;
use sha2::{Digest, Sha256};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize)]
pub struct ToolInfo {
    pub name: &'static str,
    pub version: &'static str,
}

impl Default for ToolInfo {
    fn default() -> Self {
        ToolInfo {
            name: "descwave",
            version: env!("CARGO_PKG_VERSION"),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckJson {
    pub name: String,
    pub pass: bool,
    pub residual: f64,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct ResidualsJson {
    pub interior: f64,
    pub boundary0: f64,
    pub boundary_n: f64,
    pub init0: f64,
    pub init1: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepRowJson {
    pub k: f64,
    pub m_steps: usize,
    pub max_norm: Option<f64>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepJson {
    pub rows: Vec<SweepRowJson>,
    pub bounded: bool,
}

/// The whole run report. Deterministic for a given spec and tool version,
/// except for `timing_ms`.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub tool: ToolInfo,
    pub command: String,
    pub spec_sha256: String,
    pub overall: String,
    pub validation: Vec<CheckJson>,
    pub warnings: Vec<String>,
    pub residuals: Option<ResidualsJson>,
    pub sweep: Option<SweepJson>,
    pub timing_ms: u128,
}

impl RunReport {
    pub fn new(command: &str, spec_bytes: &[u8]) -> Self {
        RunReport {
            schema_version: SCHEMA_VERSION,
            tool: ToolInfo::default(),
            command: command.into(),
            spec_sha256: sha256_hex(spec_bytes),
            overall: "fail".into(),
            validation: Vec::new(),
            warnings: Vec::new(),
            residuals: None,
            sweep: None,
            timing_ms: 0,
        }
    }

    pub fn set_validation(&mut self, report: &ValidationReport) {
        self.validation = report
            .checks
            .iter()
            .map(|c| CheckJson {
                name: c.name.clone(),
                pass: c.pass,
                residual: c.residual,
                detail: c.detail.clone(),
            })
            .collect();
        self.warnings = report
            .warnings()
            .iter()
            .map(|c| format!("{}: {}", c.name, c.detail))
            .collect();
    }

    pub fn set_residuals(&mut self, res: &SchemeResiduals, tolerance: f64, pass: bool) {
        self.residuals = Some(ResidualsJson {
            interior: res.interior,
            boundary0: res.boundary0,
            boundary_n: res.boundary_n,
            init0: res.init0,
            init1: res.init1,
            tolerance,
            pass,
        });
    }

    pub fn set_sweep(&mut self, sweep: &SweepResult) {
        self.sweep = Some(SweepJson {
            rows: sweep
                .rows
                .iter()
                .map(|r| SweepRowJson {
                    k: r.k,
                    m_steps: r.m_steps,
                    max_norm: if r.max_norm.is_finite() {
                        Some(r.max_norm)
                    } else {
                        None
                    },
                    error: r.error.clone(),
                })
                .collect(),
            bounded: sweep.bounded,
        });
    }

    pub fn write(&self, dir: &Path) -> std::io::Result<PathBuf> {
        let path = dir.join("report.json");
        let body = serde_json::to_string_pretty(self).expect("report serializes");
        atomic_write(&path, body.as_bytes())?;
        Ok(path)
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    let mut h = Sha256::new();
    h.update(bytes);
    let digest = h.finalize();
    let mut out = String::with_capacity(64);
    for b in digest {
        out.push_str(&format!("{b:02x}"));
    }
    out
}

/// Write bytes to `path` through a temp file in the same directory.
pub fn atomic_write(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    fs::create_dir_all(dir)?;
    let tmp = dir.join(format!(
        ".{}.tmp",
        path.file_name().and_then(|s| s.to_str()).unwrap_or("out")
    ));
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)
}

/// Solution grid as CSV: `i, j`, then `re`/`im` columns per component,
/// `i`-major then `j`.
pub fn solution_csv(sol: &DiscreteSolution, m: usize) -> String {
    let mut out = String::new();
    out.push_str("i,j");
    for p in 1..=m {
        out.push_str(&format!(",u{p}_re,u{p}_im"));
    }
    out.push('\n');
    for (i, col) in sol.u.iter().enumerate() {
        for (j, v) in col.iter().enumerate() {
            out.push_str(&format!("{i},{j}"));
            for z in v {
                out.push_str(&format!(",{},{}", z.re, z.im));
            }
            out.push('\n');
        }
    }
    out
}

/// Sweep table as CSV.
pub fn sweep_csv(sweep: &SweepResult) -> String {
    let mut out = String::from("k,m_steps,max_norm,error\n");
    for row in &sweep.rows {
        let norm = if row.max_norm.is_finite() {
            row.max_norm.to_string()
        } else {
            String::new()
        };
        let err = row.error.as_deref().unwrap_or("");
        out.push_str(&format!("{},{},{},{}\n", row.k, row.m_steps, norm, err));
    }
    out
}

/// Standalone gnuplot script for the sweep table.
pub fn sweep_plot_script() -> &'static str {
    "# plot the stability sweep: max grid norm against the time step\n\
     set datafile separator ','\n\
     set logscale xy\n\
     set xlabel 'time step k'\n\
     set ylabel 'max grid norm'\n\
     set key left top\n\
     set terminal pngcairo size 800,600\n\
     set output 'sweep.png'\n\
     plot 'sweep.csv' using 1:3 skip 1 with linespoints title 'max norm'\n"
}
