//! `polyflow quad`: run the rescaled flow on a quadrilateral and report the
//! limit-shape residuals. Rectangles square up; rhombi keep their angles.

use std::f64::consts::PI;
use std::path::PathBuf;

use clap::{Args, ValueEnum};

use polyflow_core::experiments::{quad_experiment, QuadClass, QuadShape};

use super::{out_path, write_file, IntegratorArgs};
use crate::config::{resolve, resolve_opt, Config};
use crate::svg::{render_panels, Panel};
use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ShapeArg {
    Rectangle,
    Generic,
    Rhombus,
}

impl std::str::FromStr for ShapeArg {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "rectangle" => Ok(ShapeArg::Rectangle),
            "generic" => Ok(ShapeArg::Generic),
            "rhombus" => Ok(ShapeArg::Rhombus),
            other => Err(format!("unknown shape {other:?}")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ExpectArg {
    Square,
    Rhombus,
}

#[derive(Args, Debug)]
pub struct QuadArgs {
    /// Starting shape.
    #[arg(long, value_enum)]
    pub shape: Option<ShapeArg>,
    /// Width/height ratio of the rectangle start.
    #[arg(long)]
    pub aspect: Option<f64>,
    /// Vertex angle (radians) of the rhombus start.
    #[arg(long)]
    pub angle: Option<f64>,
    /// Seed of the generic quadrilateral.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Perturbation amplitude of the generic quadrilateral.
    #[arg(long)]
    pub amplitude: Option<f64>,
    /// Flow exponent.
    #[arg(long)]
    pub beta: Option<f64>,
    /// Rescaled-time horizon.
    #[arg(long)]
    pub tau_end: Option<f64>,
    /// Fail (exit 3) unless the limit classifies as this shape.
    #[arg(long, value_enum)]
    pub expect: Option<ExpectArg>,
    #[command(flatten)]
    pub integrator: IntegratorArgs,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Suppress the SVG timestamp comment.
    #[arg(long)]
    pub reproducible: bool,
}

pub fn run(args: &QuadArgs, cfg: &Config) -> Result<(), CliError> {
    let shape_arg = match resolve_opt(args.shape, cfg, "shape")? {
        Some(s) => s,
        None => return Err(CliError::usage("need --shape rectangle|generic|rhombus")),
    };
    let beta = resolve(args.beta, cfg, "beta", 1.0)?;
    let tau_end = resolve(args.tau_end, cfg, "tau_end", 40.0)?;
    let out = args.out.clone().unwrap_or_else(|| PathBuf::from("out"));
    let integrator = args.integrator.resolve(cfg)?;

    let shape = match shape_arg {
        ShapeArg::Rectangle => QuadShape::Rectangle { aspect: resolve(args.aspect, cfg, "aspect", 2.0)? },
        ShapeArg::Rhombus => QuadShape::Rhombus { angle: resolve(args.angle, cfg, "angle", PI / 3.0)? },
        ShapeArg::Generic => QuadShape::Generic {
            seed: resolve(args.seed, cfg, "seed", 4)?,
            amplitude: resolve(args.amplitude, cfg, "amplitude", 0.25)?,
        },
    };
    let start = shape.build()?;
    let result = quad_experiment(shape, beta, tau_end, &integrator)?;

    let json = serde_json::json!({
        "shape": format!("{shape_arg:?}").to_lowercase(),
        "beta": beta,
        "tau_end": tau_end,
        "edge_residual": result.edge_residual,
        "angle_residual": result.angle_residual,
        "class": result.class,
        "limit": serde_json::from_str::<serde_json::Value>(&result.limit.to_json_string()).expect("json"),
    });
    write_file(&out_path(&out, "result.json"), &serde_json::to_string_pretty(&json).expect("json"))?;

    let panels = vec![
        Panel { label: "start".into(), polygon: &start },
        Panel { label: format!("tau={tau_end}"), polygon: &result.limit },
    ];
    write_file(&out_path(&out, "shapes.svg"), &render_panels(&panels, 2, args.reproducible))?;

    println!(
        "quad: shape={shape_arg:?} edge_residual={:.6e} angle_residual={:.6e} class={:?}",
        result.edge_residual, result.angle_residual, result.class
    );
    println!("quad: wrote {}", out.display());

    if let Some(expect) = args.expect {
        let matches = matches!(
            (expect, result.class),
            (ExpectArg::Square, QuadClass::Square) | (ExpectArg::Rhombus, QuadClass::Rhombus)
        );
        if !matches {
            return Err(CliError::check(format!(
                "limit classified as {:?}, expected {expect:?}",
                result.class
            )));
        }
    }
    Ok(())
}
