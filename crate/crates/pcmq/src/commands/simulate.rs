use std::path::Path;

use pcmq_core::frames::{
    fibonacci_sphere_frame, harmonic_frame_2d, random_sphere_frame, UnitNormFrame,
};
use pcmq_core::limit_error::{limiting_error, Method, DEFAULT_TOL};
use pcmq_core::quantization::{quantize_and_reconstruct, wnh_mse, QuantScheme, SignalSpec};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{FrameKind, SimulateParams};
use crate::io::{write_csv, write_frame_csv};
use crate::outcome::{Outcome, RunError};

#[derive(Debug, Clone, Serialize)]
pub struct SimulateRow {
    pub d: usize,
    #[serde(rename = "N")]
    pub n: usize,
    pub r: f64,
    pub delta: f64,
    pub eps: f64,
    pub frame: &'static str,
    pub tightness_defect: f64,
    /// `‖x − x̃‖₂`.
    pub e_delta: f64,
    /// `(d/N)‖Σ Δ_δ(⟨x, e_j⟩) e_j‖₂`.
    pub e_residual: f64,
    pub limit: f64,
    /// `|e_delta − limit| / limit`.
    pub rel_gap: f64,
    pub wnh_mse: f64,
    pub wnh_rmse: f64,
    /// `e_delta / wnh_rmse`.
    pub ratio_to_wnh: f64,
    pub passed: bool,
}

pub fn frame_name(kind: FrameKind) -> &'static str {
    match kind {
        FrameKind::Fibonacci => "fibonacci",
        FrameKind::Random => "random",
        FrameKind::Harmonic => "harmonic",
    }
}

pub fn build_frame(p: &SimulateParams) -> Result<UnitNormFrame, pcmq_core::Error> {
    match p.frame {
        FrameKind::Fibonacci => fibonacci_sphere_frame(p.n),
        FrameKind::Random => random_sphere_frame(p.d, p.n, p.seed),
        FrameKind::Harmonic => harmonic_frame_2d(p.n),
    }
}

/// `(1, 2, …, d)` unless a direction is given.
pub fn direction(p: &SimulateParams) -> Vec<f64> {
    p.direction
        .clone()
        .unwrap_or_else(|| (1..=p.d).map(|i| i as f64).collect())
}

pub fn run(p: &SimulateParams, dir: &Path) -> Result<Outcome, RunError> {
    let scheme = QuantScheme::new(p.delta)?;
    let frame = build_frame(p)?;
    let dirn = direction(p);
    let mse = wnh_mse(p.d, p.n, scheme)?;
    let rmse = mse.sqrt();
    let rows: Vec<Result<SimulateRow, pcmq_core::Error>> = p
        .radii
        .par_iter()
        .map(|&r| {
            let x = SignalSpec::along(&dirn, r, scheme)?;
            let rec = quantize_and_reconstruct(&x, &frame, scheme)?;
            let limit = limiting_error(&x, scheme, Method::Quadrature, DEFAULT_TOL)?.value;
            let rel_gap = if limit > 0.0 {
                (rec.error - limit).abs() / limit
            } else {
                rec.error
            };
            let ratio_to_wnh = rec.error / rmse;
            Ok(SimulateRow {
                d: p.d,
                n: p.n,
                r,
                delta: p.delta,
                eps: x.eps,
                frame: frame_name(p.frame),
                tightness_defect: frame.tightness_defect(),
                e_delta: rec.error,
                e_residual: rec.residual_error,
                limit,
                rel_gap,
                wnh_mse: mse,
                wnh_rmse: rmse,
                ratio_to_wnh,
                passed: rel_gap <= p.rel_tol && ratio_to_wnh >= p.wnh_factor,
            })
        })
        .collect();
    let rows: Vec<SimulateRow> = rows.into_iter().collect::<Result<_, _>>()?;

    println!(
        "d={} N={} delta={} frame={} tightness defect {:.3e}",
        p.d,
        p.n,
        p.delta,
        frame_name(p.frame),
        frame.tightness_defect()
    );
    println!(
        "{:>10} {:>14} {:>14} {:>10} {:>14} {:>10}  check",
        "r", "E_delta", "limit", "rel_gap", "WNH MSE", "E/rms"
    );
    for row in &rows {
        println!(
            "{:>10} {:>14.6e} {:>14.6e} {:>10.3e} {:>14.6e} {:>10.3}  {}",
            row.r,
            row.e_delta,
            row.limit,
            row.rel_gap,
            row.wnh_mse,
            row.ratio_to_wnh,
            if row.passed { "pass" } else { "FAIL" }
        );
    }

    let mut artifacts = vec![write_csv(&dir.join("simulate.csv"), &rows)?];
    if p.write_frame {
        artifacts.push(write_frame_csv(&dir.join("frame.csv"), &frame)?);
    }
    let passed = rows.iter().all(|r| r.passed);
    Ok(Outcome {
        subcommand: "simulate".into(),
        passed,
        artifacts,
        summary: serde_json::json!({
            "rows": rows,
            "rel_tol": p.rel_tol,
            "wnh_factor": p.wnh_factor,
        }),
    })
}
