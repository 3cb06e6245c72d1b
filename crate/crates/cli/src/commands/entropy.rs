//! `polyflow entropy`: evaluate the entropy functional rho along a run and
//! the residual of its monotonicity formula at interior sample times.

use std::path::PathBuf;

use clap::Args;

use polyflow_core::flow::{entropy_rho, evolve, monotonicity_residual};
use polyflow_core::{Complex64, Polygon};

use super::{fmt, load_polygon, out_path, write_file, IntegratorArgs};
use crate::config::{resolve, resolve_opt, Config};
use crate::CliError;

/// Residual must stay below this fraction of |d rho/dt|.
const RESIDUAL_REL_TOL: f64 = 1e-5;

#[derive(Args, Debug)]
pub struct EntropyArgs {
    /// Start from the regular N-gon.
    #[arg(long, value_name = "N")]
    pub regular: Option<usize>,
    /// Winding number of the regular start.
    #[arg(long)]
    pub k: Option<usize>,
    /// Start from a polygon file instead.
    #[arg(long, conflicts_with = "regular")]
    pub input: Option<PathBuf>,
    /// Flow exponent (must be positive).
    #[arg(long)]
    pub beta: Option<f64>,
    /// Integration horizon.
    #[arg(long)]
    pub t_end: Option<f64>,
    /// Base point: "auto" (center of mass) or "x,y".
    #[arg(long)]
    pub x0: Option<String>,
    /// Number of interior evaluation times.
    #[arg(long)]
    pub samples: Option<usize>,
    #[command(flatten)]
    pub integrator: IntegratorArgs,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn parse_x0(arg: &str, auto: Complex64) -> Result<Complex64, CliError> {
    if arg == "auto" {
        return Ok(auto);
    }
    let Some((x, y)) = arg.split_once(',') else {
        return Err(CliError::usage(format!("--x0 must be auto or x,y, got {arg:?}")));
    };
    let px: f64 = x.trim().parse().map_err(|_| CliError::usage(format!("bad x0 x-part {x:?}")))?;
    let py: f64 = y.trim().parse().map_err(|_| CliError::usage(format!("bad x0 y-part {y:?}")))?;
    Ok(Complex64::new(px, py))
}

pub fn run(args: &EntropyArgs, cfg: &Config) -> Result<(), CliError> {
    let beta = resolve(args.beta, cfg, "beta", 1.0)?;
    if !(beta > 0.0) {
        return Err(CliError::usage("entropy needs beta > 0"));
    }
    let t_end = resolve(args.t_end, cfg, "t_end", 1.5)?;
    let samples = resolve(args.samples, cfg, "samples", 20usize)?.max(2);
    let out = args.out.clone().unwrap_or_else(|| PathBuf::from("out"));
    let integrator = args.integrator.resolve(cfg)?;

    let regular_n = resolve_opt(args.regular, cfg, "regular")?;
    let winding = resolve(args.k, cfg, "k", 1usize)?;
    let p0 = match (&args.input, regular_n) {
        (Some(path), _) => load_polygon(path)?,
        (None, Some(n)) => Polygon::regular(n, winding)?,
        (None, None) => Polygon::regular(5, 1)?,
    };

    let traj = evolve(&p0, beta, t_end, &integrator)?;
    let x0_arg = match &args.x0 {
        Some(s) => s.clone(),
        None => cfg.get::<String>("x0")?.unwrap_or_else(|| "auto".to_string()),
    };
    let x0 = parse_x0(&x0_arg, p0.center_of_mass())?;

    // Interior times: away from both endpoints by the FD step, and away
    // from 0 where the formula's t^(2/beta - 1) may be singular.
    let h = polyflow_core::flow::FD_STEP;
    let t_lo = (0.05 * t_end).max(2.0 * h).max(if beta > 2.0 { integrator.dt_init } else { 0.0 });
    let t_hi = t_end - 2.0 * h;

    let mut csv = String::from("t,rho,drho_dt_formula,drho_dt_numeric,residual\n");
    let mut monotone = true;
    let mut prev_rho = f64::INFINITY;
    let mut max_ratio: f64 = 0.0;
    for i in 0..samples {
        let t = t_lo + (t_hi - t_lo) * i as f64 / (samples - 1) as f64;
        let rho = entropy_rho(&traj, x0, t)?;
        let check = monotonicity_residual(&traj, x0, t)?;
        if rho > prev_rho + 1e-9 {
            monotone = false;
        }
        prev_rho = rho;
        max_ratio = max_ratio.max(check.residual / check.formula.abs().max(f64::MIN_POSITIVE));
        csv.push_str(&format!(
            "{},{},{},{},{}\n",
            fmt(t),
            fmt(rho),
            fmt(check.formula),
            fmt(check.numeric),
            fmt(check.residual)
        ));
    }
    write_file(&out_path(&out, "entropy.csv"), &csv)?;

    let json = serde_json::json!({
        "beta": beta,
        "t_end": t_end,
        "x0": [x0.re, x0.im],
        "rho_monotone_nonincreasing": monotone,
        "max_residual_ratio": max_ratio,
        "residual_rel_tol": RESIDUAL_REL_TOL,
    });
    write_file(&out_path(&out, "summary.json"), &serde_json::to_string_pretty(&json).expect("json"))?;

    println!(
        "entropy: rho monotone: {} max residual ratio {:.3e}",
        if monotone { "pass" } else { "FAIL" },
        max_ratio
    );
    println!("entropy: wrote {}", out.display());

    if !monotone {
        return Err(CliError::check("rho increased along the run"));
    }
    if max_ratio > RESIDUAL_REL_TOL {
        return Err(CliError::check(format!(
            "monotonicity residual ratio {max_ratio:e} exceeds {RESIDUAL_REL_TOL:e}"
        )));
    }
    Ok(())
}
