use std::path::Path;

use pcmq_core::special_fn::{
    asymptotic_estimate, bessel_half_order, bessel_hankel, bessel_integral_int_order, bessel_j,
    bessel_series, BesselEval, EnvelopeBranch,
};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::BesselParams;
use crate::io::write_csv;
use crate::outcome::{Outcome, RunError};

#[derive(Debug, Serialize)]
struct EnvelopeRow {
    order: f64,
    x: f64,
    method: String,
    value: f64,
    abs_error_bound: f64,
    main_term: f64,
    residual_bound: f64,
    c: f64,
    branch: &'static str,
    /// `|J − main| − residual − slack`; positive is a violation.
    excess: f64,
    inside: bool,
    cross_checks: usize,
    consistent: bool,
}

fn branch_name(b: EnvelopeBranch) -> &'static str {
    match b {
        EnvelopeBranch::SmallOrder => "small_order",
        EnvelopeBranch::LargeArgument => "large_argument",
        EnvelopeBranch::SmallArgument => "small_argument",
    }
}

/// Evaluations by every other route that can certify this point.
fn cross_values(order: f64, x: f64) -> Vec<BesselEval> {
    let mut out = Vec::new();
    if let Ok(v) = bessel_series(order, x, 1e-10) {
        out.push(v);
    }
    if order.fract() == 0.0 {
        if let Ok(v) = bessel_integral_int_order(order as u32, x, 1e-13) {
            out.push(v);
        }
    } else if let Ok(v) = bessel_half_order(order.floor() as u32, x) {
        out.push(v);
    }
    if let Ok(v) = bessel_hankel(order, x) {
        if v.abs_error_bound < 1e-8 {
            out.push(v);
        }
    }
    out
}

fn evaluate(order: f64, x: f64) -> Result<EnvelopeRow, RunError> {
    let j = bessel_j(order, x)?;
    let env = asymptotic_estimate(order, x)?;
    let others = cross_values(order, x);
    let consistent = others.iter().all(|o| o.consistent_with(&j));
    Ok(EnvelopeRow {
        order,
        x,
        method: format!("{:?}", j.method),
        value: j.value,
        abs_error_bound: j.abs_error_bound,
        main_term: env.main_term,
        residual_bound: env.residual_bound,
        c: env.c,
        branch: branch_name(env.branch),
        excess: env.excess(&j),
        inside: env.contains(&j),
        cross_checks: others.len(),
        consistent,
    })
}

pub fn run(p: &BesselParams, dir: &Path) -> Result<Outcome, RunError> {
    let grid: Vec<(f64, f64)> = p
        .orders
        .iter()
        .flat_map(|&o| p.arguments.iter().map(move |&x| (o, x)))
        .collect();
    let rows = grid
        .par_iter()
        .map(|&(o, x)| evaluate(o, x))
        .collect::<Result<Vec<_>, _>>()?;
    let violations = rows.iter().filter(|r| !r.inside).count();
    let inconsistent = rows.iter().filter(|r| !r.consistent).count();
    println!("bessel envelope: {} points, {violations} violations, {inconsistent} cross-method disagreements", rows.len());
    for r in rows.iter().filter(|r| !r.inside || !r.consistent) {
        println!(
            "  order {} x {}: excess {:.3e}, consistent {}",
            r.order, r.x, r.excess, r.consistent
        );
    }
    let csv = write_csv(&dir.join("bessel.csv"), &rows)?;
    Ok(Outcome {
        subcommand: "bessel".into(),
        passed: violations == 0 && inconsistent == 0,
        artifacts: vec![csv],
        summary: serde_json::json!({
            "points": rows.len(),
            "violations": violations,
            "inconsistent": inconsistent,
            "worst_excess": rows.iter().map(|r| r.excess).fold(f64::NEG_INFINITY, f64::max),
        }),
    })
}
