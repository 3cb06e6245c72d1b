//! `polyflow evolve`: integrate the flow, write trajectory CSV, summary
//! JSON, and optionally an SVG snapshot sequence.

use std::f64::consts::PI;
use std::path::PathBuf;

use clap::Args;

use polyflow_core::flow::{evolve, self_similar_scale};
use polyflow_core::io::{trajectory_csv, RunSummary};
use polyflow_core::Polygon;

use super::{fmt, load_polygon, out_path, write_file, IntegratorArgs};
use crate::config::{resolve, resolve_opt, Config};
use crate::svg::{render_panels, Panel};
use crate::CliError;

/// Max relative deviation tolerated by --check-selfsim.
const SELF_SIMILAR_TOL: f64 = 1e-6;

#[derive(Args, Debug)]
pub struct EvolveArgs {
    /// Start from the regular N-gon.
    #[arg(long, value_name = "N")]
    pub regular: Option<usize>,
    /// Winding number of the regular start (star polygons for gcd(k,N)>1).
    #[arg(long)]
    pub k: Option<usize>,
    /// Start from a polygon file (.json or .csv) instead of --regular.
    #[arg(long, conflicts_with = "regular")]
    pub input: Option<PathBuf>,
    /// Flow exponent (beta = 0 runs the linear flow).
    #[arg(long)]
    pub beta: Option<f64>,
    /// Integration horizon.
    #[arg(long)]
    pub t_end: Option<f64>,
    #[command(flatten)]
    pub integrator: IntegratorArgs,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write an SVG snapshot sequence.
    #[arg(long)]
    pub svg: bool,
    /// Number of SVG snapshots.
    #[arg(long)]
    pub snapshots: Option<usize>,
    /// Compare the run against the closed-form self-similar solution
    /// (needs a --regular start); deviations above 1e-6 fail with exit 3.
    #[arg(long)]
    pub check_selfsim: bool,
    /// Suppress the SVG timestamp comment for byte-identical reruns.
    #[arg(long)]
    pub reproducible: bool,
}

pub fn run(args: &EvolveArgs, cfg: &Config) -> Result<(), CliError> {
    let beta = resolve(args.beta, cfg, "beta", 1.0)?;
    let t_end = resolve(args.t_end, cfg, "t_end", 5.0)?;
    let out = args.out.clone().unwrap_or_else(|| PathBuf::from("out"));
    let integrator = args.integrator.resolve(cfg)?;

    let regular_n = resolve_opt(args.regular, cfg, "regular")?;
    let winding = resolve(args.k, cfg, "k", 1usize)?;
    let (p0, regular_start) = match (&args.input, regular_n) {
        (Some(path), _) => (load_polygon(path)?, None),
        (None, Some(n)) => (Polygon::regular(n, winding)?, Some((n, winding))),
        (None, None) => {
            return Err(CliError::usage("need --regular N or --input FILE"));
        }
    };
    if args.check_selfsim && regular_start.is_none() {
        return Err(CliError::usage("--check-selfsim needs a --regular start"));
    }

    let traj = evolve(&p0, beta, t_end, &integrator)?;
    write_file(&out_path(&out, "trajectory.csv"), &trajectory_csv(&traj, None))?;

    let summary = RunSummary::of(&traj);
    let monotone_ok = summary.monotone_checks.all_pass();
    let mut summary_json: serde_json::Value =
        serde_json::to_value(&summary).expect("summary is serializable");

    let mut selfsim_failure = None;
    if let (true, Some((n, k))) = (args.check_selfsim, regular_start) {
        let l = 2.0 * (PI * k as f64 / n as f64).sin();
        let lambda_k = -4.0 * (PI * k as f64 / n as f64).sin().powi(2);
        let mut worst: f64 = 0.0;
        for s in traj.samples() {
            let a = self_similar_scale(s.t, beta, l, lambda_k);
            let err = s
                .polygon
                .vertices()
                .iter()
                .zip(p0.vertices())
                .map(|(x, q)| (x - a * q).norm())
                .fold(0.0, f64::max)
                / a;
            worst = worst.max(err);
        }
        let pass = worst <= SELF_SIMILAR_TOL;
        summary_json["self_similar_check"] = serde_json::json!({
            "max_rel_err": worst,
            "tolerance": SELF_SIMILAR_TOL,
            "pass": pass,
        });
        if !pass {
            selfsim_failure = Some(worst);
        }
    }

    let pretty = serde_json::to_string_pretty(&summary_json).expect("json");
    write_file(&out_path(&out, "summary.json"), &pretty)?;

    if args.svg {
        let count = resolve(args.snapshots, cfg, "snapshots", 6usize)?.max(2);
        let times: Vec<f64> = (0..count)
            .map(|i| t_end * i as f64 / (count - 1) as f64)
            .collect();
        let polys: Vec<(String, Polygon)> = times
            .iter()
            .map(|&t| Ok((format!("t={t:.3}"), traj.polygon_at(t)?)))
            .collect::<Result<_, polyflow_core::Error>>()?;
        let panels: Vec<Panel> = polys
            .iter()
            .map(|(label, p)| Panel { label: label.clone(), polygon: p })
            .collect();
        write_file(&out_path(&out, "snapshots.svg"), &render_panels(&panels, 3, args.reproducible))?;
    }

    println!(
        "evolve: N={} beta={beta} t_end={t_end} steps={}+{} F_alpha {:.6e} -> {:.6e} monotone={}",
        traj.n(),
        traj.steps_accepted,
        traj.steps_rejected,
        traj.first().energy,
        traj.last().energy,
        if monotone_ok { "pass" } else { "FAIL" }
    );
    println!("evolve: wrote {}", out.display());

    if let Some(worst) = selfsim_failure {
        return Err(CliError::check(format!(
            "self-similar deviation {} exceeds {}",
            fmt(worst),
            fmt(SELF_SIMILAR_TOL)
        )));
    }
    if !monotone_ok {
        return Err(CliError::check("monotone checks failed (see summary.json)"));
    }
    Ok(())
}
