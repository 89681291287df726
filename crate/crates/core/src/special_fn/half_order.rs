use alloc::format;

use super::series::series_sum;
use super::{BesselEval, BesselMethod};
use crate::numeric::UNIT_ROUNDOFF;
use crate::{Error, Result};

/// `J_{n+1/2}(x)` for `x > 0`.
///
/// For `x ≥ n + 1/2` the upward recurrence `J_{ν+1} = (2ν/x) J_ν − J_{ν−1}`
/// is run from `J_{1/2} = √(2/(πx)) sin x` and
/// `J_{3/2} = √(2/(πx)) (sin x / x − cos x)`, with the error bound carried
/// through the same linear recurrence. Below that the power series is used.
pub fn bessel_half_order(n: u32, x: f64) -> Result<BesselEval> {
    if !(x.is_finite() && x > 0.0) {
        return Err(Error::invalid(format!(
            "half-integer closed forms need x > 0, got {x}"
        )));
    }
    let order = n as f64 + 0.5;
    if x < order {
        let (value, bound, terms) = series_sum(order, x);
        return Ok(BesselEval {
            order,
            argument: x,
            value,
            abs_error_bound: bound,
            method: BesselMethod::Series { terms },
        });
    }
    let u = UNIT_ROUNDOFF;
    let scale = libm::sqrt(2.0 / (core::f64::consts::PI * x));
    let (s, c) = (libm::sin(x), libm::cos(x));
    let mut prev = scale * s;
    let mut prev_err = 4.0 * u * scale;
    if n == 0 {
        return Ok(recurrence_eval(order, x, prev, prev_err));
    }
    let mut cur = scale * (s / x - c);
    let mut cur_err = 6.0 * u * scale * (1.0 + 1.0 / x);
    for m in 1..n {
        let factor = (2 * m + 1) as f64 / x;
        let next = factor * cur - prev;
        let next_err =
            factor * cur_err + prev_err + 3.0 * u * (libm::fabs(factor * cur) + libm::fabs(prev));
        prev = cur;
        prev_err = cur_err;
        cur = next;
        cur_err = next_err;
    }
    Ok(recurrence_eval(order, x, cur, cur_err))
}

fn recurrence_eval(order: f64, x: f64, value: f64, bound: f64) -> BesselEval {
    BesselEval {
        order,
        argument: x,
        value,
        abs_error_bound: bound,
        method: BesselMethod::HalfOrderRecurrence,
    }
}
