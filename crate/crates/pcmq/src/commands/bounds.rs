use std::path::Path;

use pcmq_core::bounds::{
    log_spaced, lower_bound, scaling_slope_fit, two_sided_estimate, BoundReport, SlopeFit,
};
use pcmq_core::limit_error::{limiting_error_at, Method, Parity, DEFAULT_TOL};
use pcmq_core::Error as CoreError;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::BoundsParams;
use crate::io::{write_csv, write_json};
use crate::outcome::{Outcome, RunError};

/// ε used by the slope sweep: the centre of each window.
pub fn slope_eps(parity: Parity) -> f64 {
    match parity {
        Parity::Even => 0.375,
        Parity::Odd => 0.25,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SandwichRow {
    pub d: usize,
    pub n: u32,
    pub parity: &'static str,
    pub base: u64,
    pub eps: f64,
    pub r: f64,
    pub delta: f64,
    pub status: &'static str,
    pub lower: f64,
    pub integral: f64,
    pub upper: f64,
    pub integral_error: f64,
    pub holds: bool,
    pub lower_phase_corrected: f64,
    pub holds_phase_corrected: bool,
    pub note: String,
}

/// A [`BoundReport`] next to the computed limit it bounds.
#[derive(Debug, Clone, Serialize)]
pub struct BoundRow {
    #[serde(flatten)]
    pub report: BoundReport,
    pub limit: f64,
    pub limit_error: f64,
    pub lower_holds: bool,
    pub lower_phase_corrected_holds: bool,
}

/// Flat form of [`BoundRow`] for CSV, which cannot flatten.
#[derive(Debug, Clone, Serialize)]
struct BoundCsvRow {
    d: usize,
    r: f64,
    delta: f64,
    eps: f64,
    lower: f64,
    upper_scaling: f64,
    m: f64,
    i_const: f64,
    i_literal: f64,
    c_const: f64,
    window_ok: bool,
    m_phase_corrected: f64,
    lower_phase_corrected: f64,
    limit: f64,
    limit_error: f64,
    lower_holds: bool,
    lower_phase_corrected_holds: bool,
}

impl From<&BoundRow> for BoundCsvRow {
    fn from(b: &BoundRow) -> Self {
        let r = &b.report;
        Self {
            d: r.d,
            r: r.r,
            delta: r.delta,
            eps: r.eps,
            lower: r.lower,
            upper_scaling: r.upper_scaling,
            m: r.m,
            i_const: r.i_const,
            i_literal: r.i_literal,
            c_const: r.c_const,
            window_ok: r.window_ok,
            m_phase_corrected: r.m_phase_corrected,
            lower_phase_corrected: r.lower_phase_corrected,
            limit: b.limit,
            limit_error: b.limit_error,
            lower_holds: b.lower_holds,
            lower_phase_corrected_holds: b.lower_phase_corrected_holds,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SlopeRow {
    pub d: usize,
    pub eps: f64,
    pub r: f64,
    pub slope: f64,
    pub expected: f64,
    pub intercept: f64,
    pub points: usize,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
struct SlopePointRow {
    d: usize,
    k: u64,
    delta: f64,
    value: f64,
}

fn parity_name(p: Parity) -> &'static str {
    match p {
        Parity::Even => "even",
        Parity::Odd => "odd",
    }
}

struct GridPoint {
    d: usize,
    parity: Parity,
    n: u32,
    base: u64,
    eps: f64,
}

fn sandwich_row(p: &BoundsParams, g: &GridPoint) -> Result<SandwichRow, CoreError> {
    let r = (g.base as f64 + g.eps) * p.delta;
    let mut row = SandwichRow {
        d: g.d,
        n: g.n,
        parity: parity_name(g.parity),
        base: g.base,
        eps: g.eps,
        r,
        delta: p.delta,
        status: "checked",
        lower: f64::NAN,
        integral: f64::NAN,
        upper: f64::NAN,
        integral_error: f64::NAN,
        holds: false,
        lower_phase_corrected: f64::NAN,
        holds_phase_corrected: false,
        note: String::new(),
    };
    match two_sided_estimate(r, p.delta, g.n, g.parity, p.threshold) {
        Ok(s) => {
            row.lower = s.lower;
            row.integral = s.integral;
            row.upper = s.upper;
            row.integral_error = s.integral_error;
            row.holds = s.holds;
            row.lower_phase_corrected = s.lower_phase_corrected;
            row.holds_phase_corrected = s.holds_phase_corrected;
            if !s.holds {
                row.note = if s.integral < s.lower {
                    "below lower".into()
                } else {
                    "above upper".into()
                };
            }
        }
        Err(CoreError::HypothesisUnmet(why)) => {
            row.status = "hypothesis_unmet";
            row.note = why;
        }
        Err(e) => return Err(e),
    }
    Ok(row)
}

fn bound_row(p: &BoundsParams, g: &GridPoint) -> Result<BoundRow, CoreError> {
    let r = (g.base as f64 + g.eps) * p.delta;
    let report = lower_bound(g.d, r, p.delta)?;
    let limit = limiting_error_at(g.d, r, p.delta, Method::Quadrature, DEFAULT_TOL)?;
    Ok(BoundRow {
        lower_holds: report.lower <= limit.value + limit.error_estimate,
        lower_phase_corrected_holds: report.lower_phase_corrected
            <= limit.value + limit.error_estimate,
        report,
        limit: limit.value,
        limit_error: limit.error_estimate,
    })
}

pub fn run(p: &BoundsParams, dir: &Path) -> Result<Outcome, RunError> {
    let mut grid = Vec::new();
    for &d in &p.dims {
        let (parity, n) = Parity::split(d)?;
        let eps_list = match parity {
            Parity::Even => &p.even_eps,
            Parity::Odd => &p.odd_eps,
        };
        for &base in &p.bases {
            for &eps in eps_list {
                grid.push(GridPoint {
                    d,
                    parity,
                    n,
                    base,
                    eps,
                });
            }
        }
    }
    let sandwiches: Vec<Result<SandwichRow, CoreError>> =
        grid.par_iter().map(|g| sandwich_row(p, g)).collect();
    let sandwiches: Vec<SandwichRow> = sandwiches.into_iter().collect::<Result<_, _>>()?;
    let bounds: Vec<Result<BoundRow, CoreError>> =
        grid.par_iter().map(|g| bound_row(p, g)).collect();
    let bounds: Vec<BoundRow> = bounds.into_iter().collect::<Result<_, _>>()?;

    let ks = log_spaced(p.k_min, p.k_max, p.k_points);
    let fits: Vec<Result<(usize, f64, SlopeFit), CoreError>> = p
        .dims
        .par_iter()
        .map(|&d| {
            let (parity, _) = Parity::split(d)?;
            let eps = slope_eps(parity);
            scaling_slope_fit(d, p.slope_r, eps, &ks).map(|f| (d, eps, f))
        })
        .collect();
    let fits: Vec<(usize, f64, SlopeFit)> = fits.into_iter().collect::<Result<_, _>>()?;
    let slopes: Vec<SlopeRow> = fits
        .iter()
        .map(|(d, eps, f)| {
            let expected = (*d as f64 + 1.0) / 2.0;
            SlopeRow {
                d: *d,
                eps: *eps,
                r: p.slope_r,
                slope: f.slope,
                expected,
                intercept: f.intercept,
                points: f.points.len(),
                passed: (f.slope - expected).abs() <= p.slope_tol,
            }
        })
        .collect();
    let points: Vec<SlopePointRow> = fits
        .iter()
        .flat_map(|(d, _, f)| {
            f.points.iter().map(|&(k, delta, value)| SlopePointRow {
                d: *d,
                k,
                delta,
                value,
            })
        })
        .collect();

    let checked = sandwiches.iter().filter(|s| s.status == "checked").count();
    let violations: Vec<&SandwichRow> = sandwiches
        .iter()
        .filter(|s| s.status == "checked" && !s.holds)
        .collect();
    let corrected_violations = sandwiches
        .iter()
        .filter(|s| s.status == "checked" && !s.holds_phase_corrected)
        .count();
    let lower_violations = bounds
        .iter()
        .filter(|b| b.report.window_ok && !b.lower_holds)
        .count();
    let slope_failures = slopes.iter().filter(|s| !s.passed).count();

    println!(
        "sandwich: {checked} checked, {} violations ({} with corrected phase)",
        violations.len(),
        corrected_violations
    );
    for v in &violations {
        println!(
            "  d={} n={} R={}+{:.6}: lower {:.6e}  |integral| {:.6e}  upper {:.6e}  ({})",
            v.d, v.n, v.base, v.eps, v.lower, v.integral, v.upper, v.note
        );
    }
    println!("lower estimate vs limit: {lower_violations} violations");
    for s in &slopes {
        println!(
            "slope d={}: {:.4} (expected {:.1}) {}",
            s.d,
            s.slope,
            s.expected,
            if s.passed { "pass" } else { "FAIL" }
        );
    }

    let csv_rows: Vec<BoundCsvRow> = bounds.iter().map(BoundCsvRow::from).collect();
    let artifacts = vec![
        write_csv(&dir.join("bound_reports.csv"), &csv_rows)?,
        write_json(&dir.join("bound_reports.json"), &bounds)?,
        write_csv(&dir.join("sandwich.csv"), &sandwiches)?,
        write_csv(&dir.join("slopes.csv"), &slopes)?,
        write_csv(&dir.join("slope_points.csv"), &points)?,
    ];
    Ok(Outcome {
        subcommand: "bounds".into(),
        passed: violations.is_empty() && lower_violations == 0 && slope_failures == 0,
        artifacts,
        summary: serde_json::json!({
            "sandwich_checked": checked,
            "sandwich_violations": violations.len(),
            "sandwich_violations_phase_corrected": corrected_violations,
            "lower_estimate_violations": lower_violations,
            "slopes": slopes,
        }),
    })
}
