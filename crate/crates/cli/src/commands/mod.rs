//! Shared pieces of the subcommand implementations.

pub mod entropy;
pub mod evolve;
pub mod heptagon;
pub mod quad;
pub mod spectrum;
pub mod triangle;

use std::path::{Path, PathBuf};

use clap::Args;

use polyflow_core::{IntegratorConfig, Polygon};

use crate::config::{resolve, Config};
use crate::CliError;

/// 17 significant digits, matching the library's CSV formatting.
pub fn fmt(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir)
            .map_err(|e| CliError::usage(format!("cannot create {}: {e}", dir.display())))?;
    }
    std::fs::write(path, contents)
        .map_err(|e| CliError::usage(format!("cannot write {}: {e}", path.display())))
}

/// Reads a polygon from JSON ([[x, y], ...]) or CSV (j,x,y), by extension.
pub fn load_polygon(path: &Path) -> Result<Polygon, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display())))?;
    let parsed = match path.extension().and_then(|e| e.to_str()) {
        Some("csv") => Polygon::from_csv_str(&text),
        _ => Polygon::from_json_str(&text),
    };
    parsed.map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
}

/// Integrator tolerances and step policy, shared by every run command.
#[derive(Args, Debug)]
pub struct IntegratorArgs {
    /// Relative tolerance per step.
    #[arg(long)]
    pub rel_tol: Option<f64>,
    /// Absolute tolerance per step.
    #[arg(long)]
    pub abs_tol: Option<f64>,
    /// Initial step size.
    #[arg(long)]
    pub dt_init: Option<f64>,
    /// Largest allowed step size.
    #[arg(long)]
    pub dt_max: Option<f64>,
    /// Step budget (accepted + rejected).
    #[arg(long)]
    pub max_steps: Option<usize>,
}

impl IntegratorArgs {
    pub fn resolve(&self, cfg: &Config) -> Result<IntegratorConfig, CliError> {
        let d = IntegratorConfig::default();
        let out = IntegratorConfig {
            rel_tol: resolve(self.rel_tol, cfg, "rel_tol", d.rel_tol)?,
            abs_tol: resolve(self.abs_tol, cfg, "abs_tol", d.abs_tol)?,
            dt_init: resolve(self.dt_init, cfg, "dt_init", d.dt_init)?,
            dt_max: resolve(self.dt_max, cfg, "dt_max", d.dt_max)?,
            max_steps: resolve(self.max_steps, cfg, "max_steps", d.max_steps)?,
        };
        out.validate().map_err(|e| CliError::usage(e.to_string()))?;
        Ok(out)
    }
}

pub fn out_path(dir: &Path, name: &str) -> PathBuf {
    dir.join(name)
}

/// Inclusive "A..B" range, e.g. "4..12".
pub fn parse_inclusive_range(s: &str) -> Result<(usize, usize), CliError> {
    let Some((a, b)) = s.split_once("..") else {
        return Err(CliError::usage(format!("range must look like 4..12, got {s:?}")));
    };
    let lo: usize = a
        .trim()
        .parse()
        .map_err(|_| CliError::usage(format!("bad range start {a:?}")))?;
    let hi: usize = b
        .trim()
        .parse()
        .map_err(|_| CliError::usage(format!("bad range end {b:?}")))?;
    if lo < 3 || hi < lo {
        return Err(CliError::usage(format!("range {lo}..{hi} must satisfy 3 <= start <= end")));
    }
    Ok((lo, hi))
}
