use std::path::Path;

use pcmq_core::limit_error::{
    angular_constant, limiting_error_at, natural_scale, LimitErrorResult, Method,
    MonteCarloAccumulator, MonteCarloConfig, Parity,
};
use pcmq_core::quantization::{QuantScheme, SignalSpec};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{LimitParams, MethodChoice};
use crate::io::write_csv;
use crate::outcome::{Outcome, RunError};

/// Monte Carlo with batches run in parallel and merged in batch order, so the
/// result is identical to the sequential estimator for the same config.
pub fn parallel_monte_carlo(
    x: &SignalSpec,
    scheme: QuantScheme,
    config: &MonteCarloConfig,
) -> Result<LimitErrorResult, pcmq_core::Error> {
    config.validate()?;
    if x.dim() < 2 {
        return Err(pcmq_core::Error::InvalidArgument(
            "dimension must be at least 2".into(),
        ));
    }
    let parts: Vec<MonteCarloAccumulator> = (0..config.batches)
        .into_par_iter()
        .map(|b| MonteCarloAccumulator::batch(x, scheme, config, b))
        .collect();
    let mut acc = MonteCarloAccumulator::new(x.dim());
    for part in &parts {
        acc.merge(part);
    }
    Ok(acc.finish())
}

pub(crate) fn method_of(choice: MethodChoice) -> Method {
    match choice {
        MethodChoice::Quadrature => Method::Quadrature,
        MethodChoice::BesselSeries => Method::BesselSeries,
        MethodChoice::MonteCarlo => Method::MonteCarlo,
    }
}

/// One row of `limit.csv`.
#[derive(Debug, Clone, Serialize)]
pub struct LimitRow {
    pub r: f64,
    pub delta: f64,
    pub eps: f64,
    pub d: usize,
    pub method: &'static str,
    pub value: f64,
    pub error_estimate: f64,
}

#[derive(Debug, Clone, Serialize)]
struct CheckRow {
    d: usize,
    r: f64,
    reference: &'static str,
    method: &'static str,
    difference: f64,
    allowed: f64,
    passed: bool,
}

/// `(1, 2, …, d)`, the direction used for the vector-valued estimator.
fn default_direction(dim: usize) -> Vec<f64> {
    (1..=dim).map(|i| i as f64).collect()
}

fn evaluate(
    p: &LimitParams,
    scheme: QuantScheme,
    dim: usize,
    r: f64,
    method: Method,
) -> Result<LimitErrorResult, pcmq_core::Error> {
    match method {
        Method::MonteCarlo => {
            let x = SignalSpec::along(&default_direction(dim), r, scheme)?;
            let cfg = MonteCarloConfig {
                samples: p.samples,
                batches: p.batches,
                seed: p.seed,
            };
            parallel_monte_carlo(&x, scheme, &cfg)
        }
        _ => limiting_error_at(dim, r, p.delta, method, p.tol),
    }
}

pub fn run(p: &LimitParams, dir: &Path) -> Result<Outcome, RunError> {
    let scheme = QuantScheme::new(p.delta)?;
    let methods: Vec<Method> = p.methods.iter().map(|&m| method_of(m)).collect();
    let mut grid = Vec::new();
    for &d in &p.dims {
        for &r in &p.radii {
            for &m in &methods {
                grid.push((d, r, m));
            }
        }
    }
    // results come back in grid order; the first failure in that order wins
    let results: Vec<Result<LimitErrorResult, pcmq_core::Error>> = grid
        .par_iter()
        .map(|&(d, r, m)| evaluate(p, scheme, d, r, m))
        .collect();
    let mut rows = Vec::with_capacity(grid.len());
    for (&(d, r, _), res) in grid.iter().zip(results) {
        let res = res?;
        let ratio = r / p.delta;
        rows.push(LimitRow {
            r,
            delta: p.delta,
            eps: ratio - ratio.floor(),
            d,
            method: res.method.name(),
            value: res.value,
            error_estimate: res.error_estimate,
        });
    }

    let mut checks = Vec::new();
    for chunk in rows.chunks(methods.len()) {
        let reference = chunk
            .iter()
            .find(|r| r.method == Method::Quadrature.name())
            .or_else(|| chunk.first());
        let Some(reference) = reference else { continue };
        for row in chunk {
            if std::ptr::eq(row, reference) {
                continue;
            }
            let difference = (row.value - reference.value).abs();
            let allowed = if row.method == Method::MonteCarlo.name() {
                p.mc_sigmas * row.error_estimate + reference.error_estimate
            } else {
                let (parity, n) = Parity::split(row.d)?;
                let floor = row.d as f64
                    * angular_constant(row.d)?
                    * natural_scale(row.r.max(f64::MIN_POSITIVE), p.delta, n, parity);
                p.agreement
                    * reference
                        .value
                        .abs()
                        .max(row.value.abs())
                        .max(p.tol * floor)
                    + reference.error_estimate
                    + row.error_estimate
            };
            checks.push(CheckRow {
                d: row.d,
                r: row.r,
                reference: reference.method,
                method: row.method,
                difference,
                allowed,
                passed: difference <= allowed,
            });
        }
    }

    println!(
        "{:>3} {:>12} {:>14} {:>22} {:>12}",
        "d", "r", "method", "value", "error"
    );
    for row in &rows {
        println!(
            "{:>3} {:>12} {:>14} {:>22.15e} {:>12.3e}",
            row.d, row.r, row.method, row.value, row.error_estimate
        );
    }
    let failures = checks.iter().filter(|c| !c.passed).count();
    for c in checks.iter().filter(|c| !c.passed) {
        println!(
            "disagreement: d={} r={} {} vs {}: {:.3e} > {:.3e}",
            c.d, c.r, c.method, c.reference, c.difference, c.allowed
        );
    }
    let table = write_csv(&dir.join("limit.csv"), &rows)?;
    let check_table = write_csv(&dir.join("limit_checks.csv"), &checks)?;
    Ok(Outcome {
        subcommand: "limit".into(),
        passed: failures == 0,
        artifacts: vec![table, check_table],
        summary: serde_json::json!({
            "rows": rows.len(),
            "checks": checks.len(),
            "failures": failures,
        }),
    })
}
