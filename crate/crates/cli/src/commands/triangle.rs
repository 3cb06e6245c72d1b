//! `polyflow triangle`: rescaled-flow Lyapunov run on one triangle, writing
//! the angle/V/Vdot CSV and a summary.

use std::f64::consts::PI;
use std::path::PathBuf;

use clap::Args;

use polyflow_core::experiments::{random_triangle, triangle_convergence_run};
use polyflow_core::io::triangle_run_csv;
use polyflow_core::rng::Lcg64;
use polyflow_core::triangle::TriangleAngles;

use super::{load_polygon, out_path, write_file, IntegratorArgs};
use crate::config::{resolve, Config};
use crate::CliError;

#[derive(Args, Debug)]
pub struct TriangleArgs {
    /// Triangle file (.json or .csv with exactly three vertices).
    #[arg(long)]
    pub vertices: Option<PathBuf>,
    /// Seeded random triangle instead of a file.
    #[arg(long, conflicts_with = "vertices")]
    pub random_seed: Option<u64>,
    /// Flow exponent.
    #[arg(long)]
    pub beta: Option<f64>,
    /// Cap on the rescaled-time horizon.
    #[arg(long)]
    pub tau_end: Option<f64>,
    /// Stop once max |theta - pi/3| falls below this.
    #[arg(long)]
    pub target: Option<f64>,
    #[command(flatten)]
    pub integrator: IntegratorArgs,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn run(args: &TriangleArgs, cfg: &Config) -> Result<(), CliError> {
    let beta = resolve(args.beta, cfg, "beta", 1.0)?;
    let tau_end = resolve(args.tau_end, cfg, "tau_end", 200.0)?;
    let target = resolve(args.target, cfg, "target", 1e-6)?;
    let out = args.out.clone().unwrap_or_else(|| PathBuf::from("out"));
    let integrator = args.integrator.resolve(cfg)?;

    let mut triangle = match &args.vertices {
        Some(path) => {
            let p = load_polygon(path)?;
            if p.n() != 3 {
                return Err(CliError::usage(format!(
                    "{} has {} vertices, need exactly 3",
                    path.display(),
                    p.n()
                )));
            }
            p
        }
        None => {
            let seed = resolve(args.random_seed, cfg, "random_seed", 3u64)?;
            random_triangle(&mut Lcg64::new(seed))
        }
    };

    // Clockwise input is relabeled counterclockwise before the run.
    if TriangleAngles::of_polygon(&triangle).is_err() {
        let v = triangle.vertices().to_vec();
        let reversed = polyflow_core::Polygon::new(vec![v[0], v[2], v[1]])
            .expect("three vertices");
        if TriangleAngles::of_polygon(&reversed).is_ok() {
            triangle = reversed;
        }
    }

    let run = triangle_convergence_run(&triangle, beta, target, tau_end, &integrator)?;
    write_file(&out_path(&out, "run.csv"), &triangle_run_csv(&run.trajectory)?)?;

    let final_angles = TriangleAngles::of_polygon(&run.trajectory.last().polygon)?.theta();
    let v_monotone = run.v_values.windows(2).all(|w| w[1] <= w[0] + 1e-10);
    let json = serde_json::json!({
        "beta": beta,
        "tau_end": run.trajectory.t_end(),
        "final_angles": final_angles,
        "final_angle_deviation": run.final_angle_deviation,
        "equilateral_angle": PI / 3.0,
        "v_monotone_nonincreasing": v_monotone,
    });
    write_file(&out_path(&out, "summary.json"), &serde_json::to_string_pretty(&json).expect("json"))?;

    println!(
        "triangle: tau={:.2} final deviation {:.3e} V monotone: {}",
        run.trajectory.t_end(),
        run.final_angle_deviation,
        if v_monotone { "pass" } else { "FAIL" }
    );
    println!("triangle: wrote {}", out.display());

    if !v_monotone {
        return Err(CliError::check("V increased along the run"));
    }
    Ok(())
}
