use alloc::format;

use super::{at_origin, check_argument, check_order, BesselEval, BesselMethod};
use crate::numeric::{gamma_half_integer, CompensatedSum, UNIT_ROUNDOFF};
use crate::{Error, Result};

const MAX_SERIES_TERMS: usize = 4000;

/// Largest argument accepted by [`bessel_series`]: `2·max(30, α²)`.
pub fn series_domain_limit(order: f64) -> f64 {
    2.0 * f64::max(30.0, order * order)
}

/// `J_α(x) = Σ_k (-1)^k / (k! Γ(k+α+1)) (x/2)^{2k+α}`.
///
/// The bound adds the alternating tail (once the terms decrease) to a
/// rounding term proportional to `Σ |t_k|`; if the two exceed `tol` the call
/// fails with [`Error::PrecisionExhausted`] instead of returning a value.
pub fn bessel_series(order: f64, x: f64, tol: f64) -> Result<BesselEval> {
    check_order(order)?;
    check_argument(x)?;
    if !(tol > 0.0) {
        return Err(Error::invalid(format!("tolerance {tol} must be positive")));
    }
    if x > series_domain_limit(order) {
        return Err(Error::domain(format!(
            "series evaluation of J_{order} limited to x <= {}, got {x}",
            series_domain_limit(order)
        )));
    }
    if x == 0.0 {
        return Ok(at_origin(order));
    }
    let (value, bound, terms) = series_sum(order, x);
    if bound > tol {
        return Err(Error::PrecisionExhausted {
            achieved: bound,
            requested: tol,
        });
    }
    Ok(BesselEval {
        order,
        argument: x,
        value,
        abs_error_bound: bound,
        method: BesselMethod::Series { terms },
    })
}

/// Series value, certified bound and number of terms; `x > 0`.
pub(crate) fn series_sum(order: f64, x: f64) -> (f64, f64, usize) {
    let half = 0.5 * x;
    let q = half * half;
    let mut term = libm::pow(half, order) / gamma_half_integer(order + 1.0);
    let mut acc = CompensatedSum::new();
    let mut magnitude = 0.0;
    let mut k = 0usize;
    let tail = loop {
        acc.add(term);
        magnitude += libm::fabs(term);
        let kf = (k + 1) as f64;
        let ratio = q / (kf * (kf + order));
        let next = -term * ratio;
        k += 1;
        // once ratio < 1 the terms decrease monotonically in modulus
        if ratio < 1.0
            && (next == 0.0 || libm::fabs(next) <= 0.25 * UNIT_ROUNDOFF * libm::fabs(acc.value()))
        {
            break libm::fabs(next);
        }
        if k >= MAX_SERIES_TERMS {
            break f64::INFINITY;
        }
        term = next;
    };
    let rounding = (4.0 * k as f64 + order + 8.0) * UNIT_ROUNDOFF * magnitude;
    (acc.value(), tail + rounding, k)
}
