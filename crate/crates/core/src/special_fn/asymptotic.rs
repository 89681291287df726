use alloc::format;

use super::BesselEval;
use crate::numeric::UNIT_ROUNDOFF;
use crate::{Error, Result};

/// Which constant the residual envelope uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum EnvelopeBranch {
    /// `|α| ≤ 1/2`: `c = (2/π)^{3/2}`.
    SmallOrder,
    /// `α > 1/2`, `x ≥ √μ`: `c = √2/2`.
    LargeArgument,
    /// `α > 1/2`, `0 < x < √μ`: `c = 5/4`.
    SmallArgument,
}

/// `J_α(x) = √(2/(πx)) cos(x − ω_α) + θ c μ x^{-3/2}` with `|θ| ≤ 1`.
///
/// `θ` is never computed; the envelope is a bound to check against certified
/// evaluations.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AsymptoticEnvelope {
    pub order: f64,
    pub argument: f64,
    /// `√(2/(πx)) cos(x − ω_α)`.
    pub main_term: f64,
    /// `ω_α = πα/2 + π/4`.
    pub omega: f64,
    /// `μ = |α² − 1/4|`.
    pub mu: f64,
    pub c: f64,
    pub branch: EnvelopeBranch,
    /// `c μ x^{-3/2}`.
    pub residual_bound: f64,
}

impl AsymptoticEnvelope {
    /// Rounding in the main term itself.
    pub fn main_term_error(&self) -> f64 {
        let scale = libm::sqrt(2.0 / (core::f64::consts::PI * self.argument));
        scale * UNIT_ROUNDOFF * (self.argument + self.omega + 8.0)
    }

    /// Whether a certified evaluation lies inside the envelope, allowing for
    /// the evaluation's own bound.
    pub fn contains(&self, j: &BesselEval) -> bool {
        self.excess(j) <= 0.0
    }

    /// `|J − main| − residual − slack`; positive means a violation.
    pub fn excess(&self, j: &BesselEval) -> f64 {
        libm::fabs(j.value - self.main_term)
            - self.residual_bound
            - j.abs_error_bound
            - self.main_term_error()
    }
}

/// The large-argument estimate with its branch constant.
pub fn asymptotic_estimate(order: f64, x: f64) -> Result<AsymptoticEnvelope> {
    if !(x.is_finite() && x > 0.0) {
        return Err(Error::invalid(format!(
            "asymptotic estimate needs x > 0, got {x}"
        )));
    }
    if !order.is_finite() {
        return Err(Error::invalid(format!("order {order} must be finite")));
    }
    let pi = core::f64::consts::PI;
    let omega = 0.5 * pi * order + 0.25 * pi;
    let mu = libm::fabs(order * order - 0.25);
    let (c, branch) = envelope_constant(order, x, mu);
    let main_term = libm::sqrt(2.0 / (pi * x)) * libm::cos(x - omega);
    Ok(AsymptoticEnvelope {
        order,
        argument: x,
        main_term,
        omega,
        mu,
        c,
        branch,
        residual_bound: c * mu * libm::pow(x, -1.5),
    })
}

pub(crate) fn envelope_constant(order: f64, x: f64, mu: f64) -> (f64, EnvelopeBranch) {
    if libm::fabs(order) <= 0.5 {
        (
            libm::pow(2.0 / core::f64::consts::PI, 1.5),
            EnvelopeBranch::SmallOrder,
        )
    } else if x >= libm::sqrt(mu) {
        (
            core::f64::consts::SQRT_2 / 2.0,
            EnvelopeBranch::LargeArgument,
        )
    } else {
        (1.25, EnvelopeBranch::SmallArgument)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special_fn::{bessel_half_order, bessel_series};

    #[test]
    fn order_one_half_has_no_residual() {
        for &x in &[0.3, 1.0, 7.0, 42.0] {
            let env = asymptotic_estimate(0.5, x).unwrap();
            assert_eq!(env.mu, 0.0);
            assert_eq!(env.residual_bound, 0.0);
            let j = bessel_half_order(0, x).unwrap();
            assert!(env.contains(&j));
        }
    }

    #[test]
    fn small_argument_branch_for_order_three() {
        let env = asymptotic_estimate(3.0, 2.0).unwrap();
        assert_eq!(env.branch, EnvelopeBranch::SmallArgument);
        assert_eq!(env.c, 1.25);
        assert!((env.mu - 8.75).abs() < 1e-15);
    }

    #[test]
    fn order_one_at_ten_inside_envelope() {
        let env = asymptotic_estimate(1.0, 10.0).unwrap();
        assert_eq!(env.branch, EnvelopeBranch::LargeArgument);
        let j = bessel_series(1.0, 10.0, 1e-10).unwrap();
        let bound = (core::f64::consts::SQRT_2 / 2.0) * 0.75 * libm::pow(10.0, -1.5);
        assert!((env.residual_bound - bound).abs() < 1e-16);
        assert!((j.value - env.main_term).abs() <= bound);
    }
}
