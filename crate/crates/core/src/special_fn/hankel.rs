use alloc::format;

use super::{check_order, BesselEval, BesselMethod};
use crate::numeric::UNIT_ROUNDOFF;
use crate::{Error, Result};

const MAX_TERMS: usize = 120;

/// Hankel's large-argument expansion
/// `J_ν(x) = √(2/(πx)) (P cos χ − Q sin χ)`, `χ = x − (ν/2 + 1/4)π`.
///
/// For real `ν` and `x > 0` the remainder of `P` after `ℓ ≥ ν/2 − 1/4` terms
/// (of `Q` after `ℓ ≥ ν/2 − 3/4` terms) is bounded by the first neglected
/// term, so the truncation point is picked to minimise the two neglected
/// terms subject to those constraints. For half-integer `ν` the expansion
/// terminates and only rounding remains.
pub fn bessel_hankel(order: f64, x: f64) -> Result<BesselEval> {
    check_order(order)?;
    if !(x.is_finite() && x > 0.0) {
        return Err(Error::invalid(format!(
            "Hankel expansion needs x > 0, got {x}"
        )));
    }
    let mu4 = 4.0 * order * order;
    let mut b = [0.0f64; MAX_TERMS + 2];
    b[0] = 1.0;
    let mut len = 1;
    while len < MAX_TERMS + 2 {
        let k = len as f64;
        let odd = 2.0 * k - 1.0;
        b[len] = b[len - 1] * (mu4 - odd * odd) / (8.0 * k * x);
        len += 1;
        if !b[len - 1].is_finite() || libm::fabs(b[len - 1]) > 1e300 {
            break;
        }
    }
    // smallest K with ceil(K/2) >= ν/2 − 1/4 and floor(K/2) >= ν/2 − 3/4
    let mut k_min = 1usize;
    while !((k_min.div_ceil(2)) as f64 >= 0.5 * order - 0.25
        && (k_min / 2) as f64 >= 0.5 * order - 0.75)
    {
        k_min += 1;
    }
    let mut best = k_min;
    let mut best_err = f64::INFINITY;
    for k in k_min..len.saturating_sub(1) {
        let e = libm::fabs(b[k]) + libm::fabs(b[k + 1]);
        if e < best_err {
            best_err = e;
            best = k;
        }
        if e == 0.0 {
            break;
        }
        // past the smallest terms the expansion diverges
        if e > 4.0 * best_err && k > best + 2 {
            break;
        }
    }
    let mut p = 0.0;
    let mut q = 0.0;
    let mut magnitude = 0.0;
    for (k, &bk) in b.iter().enumerate().take(best) {
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            p += sign * bk;
        } else {
            q += sign * bk;
        }
        magnitude += (2.0 * k as f64 + 4.0) * libm::fabs(bk);
    }
    let omega = (0.5 * order + 0.25) * core::f64::consts::PI;
    // cos χ and sin χ by angle addition: libm reduces the exact x, so only
    // the rounding of ω enters, not that of x − ω
    let (sx, cx) = libm::sincos(x);
    let (so, co) = libm::sincos(omega);
    let cos_chi = cx * co + sx * so;
    let sin_chi = sx * co - cx * so;
    let scale = libm::sqrt(2.0 / (core::f64::consts::PI * x));
    let value = scale * (p * cos_chi - q * sin_chi);
    let rounding =
        scale * UNIT_ROUNDOFF * (magnitude + (libm::fabs(p) + libm::fabs(q)) * (omega + 8.0));
    Ok(BesselEval {
        order,
        argument: x,
        value,
        abs_error_bound: scale * best_err + rounding,
        method: BesselMethod::Hankel { terms: best },
    })
}
