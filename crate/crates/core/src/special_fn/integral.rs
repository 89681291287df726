use alloc::format;

use super::{at_origin, check_argument, BesselEval, BesselMethod};
use crate::numeric::UNIT_ROUNDOFF;
use crate::quadrature::{composite_doubling, GaussLegendre};
use crate::{Error, Result};

const RULE_NODES: usize = 20;
const MAX_PANELS: usize = 1 << 18;

/// `J_n(x) = (1/π) ∫_0^π cos(nτ − x sin τ) dτ` by a 20-point Gauss–Legendre
/// rule on doubling panel counts; stops when two successive counts agree to
/// `quad_tol`.
pub fn bessel_integral_int_order(n: u32, x: f64, quad_tol: f64) -> Result<BesselEval> {
    check_argument(x)?;
    if !(quad_tol > 0.0) {
        return Err(Error::invalid(format!(
            "quadrature tolerance {quad_tol} must be positive"
        )));
    }
    let order = n as f64;
    if x == 0.0 {
        return Ok(at_origin(order));
    }
    let rule = GaussLegendre::new(RULE_NODES);
    let initial = 1 + ((x + order) / 8.0) as usize;
    let pi = core::f64::consts::PI;
    let est = composite_doubling(&rule, 0.0, pi, initial, MAX_PANELS, quad_tol * pi, |t| {
        libm::cos(order * t - x * libm::sin(t))
    })?;
    let panels = est.evaluations / RULE_NODES;
    // the cosine argument carries an absolute error of order u·(nπ + x)
    let rounding = 2.0 * UNIT_ROUNDOFF * (order * pi + x + 2.0);
    Ok(BesselEval {
        order,
        argument: x,
        value: est.value / pi,
        abs_error_bound: est.error / pi + rounding,
        method: BesselMethod::Integral { panels },
    })
}
