//! `polyflow spectrum`: sweep N (and optionally several beta values),
//! classify the linearization spectrum, and write one report JSON per case.
//! Dimension mismatches against the stability theory exit with code 3.

use std::path::PathBuf;

use clap::Args;

use polyflow_core::linearize::{classify_spectrum, SpectralReport};

use super::{out_path, parse_inclusive_range, write_file, IntegratorArgs};
use crate::config::{resolve, Config};
use crate::CliError;

#[derive(Args, Debug)]
pub struct SpectrumArgs {
    /// Inclusive N range, e.g. 4..12.
    #[arg(long)]
    pub n_range: Option<String>,
    /// Flow exponent (repeatable: --beta 0.5 --beta 1).
    #[arg(long)]
    pub beta: Vec<f64>,
    /// Override the zero-classification threshold.
    #[arg(long)]
    pub zero_threshold: Option<f64>,
    /// Worker threads for the sweep.
    #[arg(long)]
    pub jobs: Option<usize>,
    #[command(flatten)]
    pub integrator: IntegratorArgs,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn expected_center_dim(n: usize) -> usize {
    if n == 4 {
        2
    } else {
        1
    }
}

fn check_report(report: &SpectralReport) -> Result<(), String> {
    if report.dim_unstable != 2 {
        return Err(format!("dim_unstable = {}, expected 2", report.dim_unstable));
    }
    let center = expected_center_dim(report.n);
    if report.dim_center != center {
        return Err(format!("dim_center = {}, expected {center}", report.dim_center));
    }
    if report.dim_stable != 2 * report.n - 2 - center {
        return Err(format!("dim_stable = {}", report.dim_stable));
    }
    Ok(())
}

pub fn run(args: &SpectrumArgs, cfg: &Config) -> Result<(), CliError> {
    let range = match &args.n_range {
        Some(r) => r.clone(),
        None => cfg.get::<String>("n_range")?.unwrap_or_else(|| "4..12".to_string()),
    };
    let (lo, hi) = parse_inclusive_range(&range)?;
    let betas = if args.beta.is_empty() {
        vec![cfg.get::<f64>("beta")?.unwrap_or(1.0)]
    } else {
        args.beta.clone()
    };
    for b in &betas {
        if !(*b > 0.0) {
            return Err(CliError::usage(format!("spectrum needs beta > 0, got {b}")));
        }
    }
    let jobs = resolve(args.jobs, cfg, "jobs", 1usize)?.max(1);
    let out = args.out.clone().unwrap_or_else(|| PathBuf::from("out"));

    let cases: Vec<(usize, f64)> = (lo..=hi)
        .flat_map(|n| betas.iter().map(move |&b| (n, b)))
        .collect();

    // Classifications are pure; split the (N, beta) grid across threads.
    let threshold = args.zero_threshold;
    let mut reports: Vec<(usize, f64, SpectralReport)> = Vec::with_capacity(cases.len());
    if jobs == 1 {
        for &(n, beta) in &cases {
            reports.push((n, beta, classify_spectrum(n, beta, threshold)?));
        }
    } else {
        let chunks: Vec<Vec<(usize, f64)>> =
            cases.chunks(cases.len().div_ceil(jobs)).map(|c| c.to_vec()).collect();
        let results = std::thread::scope(|scope| {
            let handles: Vec<_> = chunks
                .iter()
                .map(|chunk| {
                    scope.spawn(move || {
                        chunk
                            .iter()
                            .map(|&(n, beta)| classify_spectrum(n, beta, threshold).map(|r| (n, beta, r)))
                            .collect::<Result<Vec<_>, _>>()
                    })
                })
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("worker thread panicked"))
                .collect::<Result<Vec<_>, _>>()
        })?;
        for batch in results {
            reports.extend(batch);
        }
        reports.sort_by(|a, b| (a.0, a.1).partial_cmp(&(b.0, b.1)).expect("finite"));
    }

    let mut failures = Vec::new();
    for (n, beta, report) in &reports {
        let name = if betas.len() == 1 {
            format!("spectral_N{n}.json")
        } else {
            format!("spectral_N{n}_beta{beta}.json")
        };
        write_file(&out_path(&out, &name), &serde_json::to_string_pretty(&report.to_json()).expect("json"))?;
        let verdict = match check_report(report) {
            Ok(()) => "pass".to_string(),
            Err(msg) => {
                failures.push(format!("N={n} beta={beta}: {msg}"));
                format!("FAIL ({msg})")
            }
        };
        println!(
            "spectrum: N={n} beta={beta} dims=({}, {}, {}) fd_err={:.2e} gap={:.4} {verdict}",
            report.dim_unstable,
            report.dim_center,
            report.dim_stable,
            report.fd_jacobian_max_err,
            report.spectral_gap
        );
    }
    println!("spectrum: wrote {} reports to {}", reports.len(), out.display());

    if !failures.is_empty() {
        return Err(CliError::check(failures.join("; ")));
    }
    Ok(())
}
