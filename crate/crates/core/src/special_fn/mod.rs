//! Bessel functions of the first kind for the orders used by the limiting
//! error formulas (nonnegative integers and half-integers), each value
//! carrying a certified absolute error bound.
//!
//! Evaluation routes:
//!
//! | route | orders | domain |
//! |---|---|---|
//! | [`bessel_series`] | all | small `x` (rounding grows like `I_α(x)`) |
//! | [`bessel_integral_int_order`] | integer | any `x`, cost grows with `x` |
//! | [`bessel_half_order`] | half-integer | `x > 0` |
//! | [`bessel_hankel`] | all | large `x` |
//!
//! [`bessel_j`] picks a route; [`asymptotic_estimate`] gives the
//! large-argument main term with its residual envelope, and
//! [`alternating_bessel_sum`] evaluates `Σ_k (-1)^k k^{-p} J_α(2kπR)`.

mod alternating;
mod asymptotic;
mod half_order;
mod hankel;
mod integral;
mod series;

pub use alternating::{
    alternating_bessel_sum, alternating_bessel_sum_truncated, MAX_ALTERNATING_TERMS,
};
pub use asymptotic::{asymptotic_estimate, AsymptoticEnvelope, EnvelopeBranch};
pub use half_order::bessel_half_order;
pub use hankel::bessel_hankel;
pub use integral::bessel_integral_int_order;
pub use series::{bessel_series, series_domain_limit};

use alloc::format;

use crate::numeric::is_half_integer_multiple;
use crate::{Error, Result};

/// How a [`BesselEval`] was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum BesselMethod {
    /// Closed value at `x = 0`.
    Exact,
    Series {
        terms: usize,
    },
    Integral {
        panels: usize,
    },
    HalfOrderRecurrence,
    Hankel {
        terms: usize,
    },
    AlternatingSum {
        terms: usize,
    },
}

/// A computed Bessel value with a certified absolute error bound.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BesselEval {
    pub order: f64,
    pub argument: f64,
    pub value: f64,
    pub abs_error_bound: f64,
    pub method: BesselMethod,
}

impl BesselEval {
    pub(crate) fn exact(order: f64, argument: f64, value: f64) -> Self {
        Self {
            order,
            argument,
            value,
            abs_error_bound: 0.0,
            method: BesselMethod::Exact,
        }
    }

    /// `true` if the two brackets `value ± bound` intersect.
    pub fn consistent_with(&self, other: &BesselEval) -> bool {
        libm::fabs(self.value - other.value) <= self.abs_error_bound + other.abs_error_bound
    }
}

pub(crate) fn check_order(order: f64) -> Result<()> {
    if is_half_integer_multiple(order) {
        Ok(())
    } else {
        Err(Error::invalid(format!(
            "Bessel order {order} is not a nonnegative multiple of 1/2"
        )))
    }
}

pub(crate) fn check_argument(x: f64) -> Result<()> {
    if x.is_finite() && x >= 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(format!(
            "Bessel argument {x} must be finite and nonnegative"
        )))
    }
}

/// Value at `x = 0`: `J_0(0) = 1`, `J_α(0) = 0` for `α > 0`.
pub(crate) fn at_origin(order: f64) -> BesselEval {
    BesselEval::exact(order, 0.0, if order == 0.0 { 1.0 } else { 0.0 })
}

/// Below this argument the power series is used for integer orders.
const SERIES_CUTOFF: f64 = 8.0;
/// A Hankel evaluation with a bound below this is accepted without trying
/// the quadrature route.
const HANKEL_ACCEPT: f64 = 1e-14;

/// Certified `J_α(x)` for `α` a nonnegative multiple of 1/2 and `x ≥ 0`.
pub fn bessel_j(order: f64, x: f64) -> Result<BesselEval> {
    check_order(order)?;
    check_argument(x)?;
    if x == 0.0 {
        return Ok(at_origin(order));
    }
    if libm::floor(order) != order {
        return bessel_half_order(libm::floor(order) as u32, x);
    }
    if x <= SERIES_CUTOFF {
        let (value, bound, terms) = series::series_sum(order, x);
        return Ok(BesselEval {
            order,
            argument: x,
            value,
            abs_error_bound: bound,
            method: BesselMethod::Series { terms },
        });
    }
    let hankel = bessel_hankel(order, x)?;
    // the quadrature route carries a rounding term of at least 2u·x, so it
    // cannot improve on a Hankel bound of that size
    if hankel.abs_error_bound <= f64::max(HANKEL_ACCEPT, 4.0 * crate::numeric::UNIT_ROUNDOFF * x) {
        return Ok(hankel);
    }
    match bessel_integral_int_order(order as u32, x, 1e-15) {
        Ok(quad) if quad.abs_error_bound < hankel.abs_error_bound => Ok(quad),
        _ => Ok(hankel),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dispatcher_rejects_bad_orders() {
        assert!(matches!(bessel_j(0.3, 1.0), Err(Error::InvalidArgument(_))));
        assert!(matches!(
            bessel_j(-1.0, 1.0),
            Err(Error::InvalidArgument(_))
        ));
        assert!(matches!(
            bessel_j(1.0, -1.0),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn dispatcher_bounds_are_tight_across_routes() {
        for &order in &[0.0, 0.5, 1.0, 2.5, 3.0, 6.0] {
            for &x in &[0.5, 3.0, 9.0, 15.0, 40.0, 300.0] {
                let j = bessel_j(order, x).unwrap();
                assert!(
                    j.abs_error_bound < 1e-11,
                    "J_{order}({x}) bound {}",
                    j.abs_error_bound
                );
            }
        }
    }

    #[test]
    fn known_values() {
        // reference values of J_0, J_1 at 10 and J_5(1)
        let j0 = bessel_j(0.0, 10.0).unwrap();
        assert!((j0.value - (-0.245_935_764_451_348_3)).abs() < 1e-14);
        let j1 = bessel_j(1.0, 10.0).unwrap();
        assert!((j1.value - 0.043_472_746_168_861_44).abs() < 1e-14);
        let j5 = bessel_j(5.0, 1.0).unwrap();
        assert!((j5.value - 2.497_577_302_112_344e-4).abs() < 1e-17);
    }
}
