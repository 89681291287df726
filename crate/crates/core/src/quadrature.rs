//! Gauss–Legendre rules and the two adaptive drivers built on them.

use alloc::vec::Vec;

use crate::numeric::{CompensatedSum, UNIT_ROUNDOFF};
use crate::{Error, Result};

/// An `n`-point Gauss–Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Nodes by Newton iteration on the three-term recurrence.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "a quadrature rule needs at least one node");
        let mut nodes = Vec::with_capacity(n);
        let mut weights = Vec::with_capacity(n);
        for i in 0..n {
            let mut x = libm::cos(core::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5));
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if libm::fabs(dx) <= 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d != 0.0 {
                dp = d;
            }
            nodes.push(x);
            weights.push(2.0 / ((1.0 - x * x) * dp * dp));
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `∫_a^b f`.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let acc: CompensatedSum = self
            .nodes
            .iter()
            .zip(&self.weights)
            .map(|(&t, &w)| w * f(mid + half * t))
            .collect();
        half * acc.value()
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadEstimate {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

/// A coarse/fine rule pair; the fine result is kept and the difference is the
/// error estimate.
#[derive(Debug, Clone)]
pub struct RulePair {
    coarse: GaussLegendre,
    fine: GaussLegendre,
}

impl Default for RulePair {
    fn default() -> Self {
        Self::new(10, 20)
    }
}

impl RulePair {
    pub fn new(coarse: usize, fine: usize) -> Self {
        Self {
            coarse: GaussLegendre::new(coarse),
            fine: GaussLegendre::new(fine),
        }
    }

    /// Adaptive bisection on `[a, b]` for an integrand that is smooth inside
    /// the interval.
    pub fn adaptive<F>(
        &self,
        a: f64,
        b: f64,
        tol: f64,
        max_depth: u32,
        f: &mut F,
    ) -> Result<QuadEstimate>
    where
        F: FnMut(f64) -> f64,
    {
        self.adaptive_with_magnitude(a, b, tol, max_depth, &mut |t| {
            let v = f(t);
            (v, libm::fabs(v))
        })
    }

    /// As [`RulePair::adaptive`], for an integrand returning `(value, m)`
    /// where `m` bounds the size of the terms that cancelled in computing
    /// `value`; differences at the level of `u ∫ m` are treated as converged.
    pub fn adaptive_with_magnitude<F>(
        &self,
        a: f64,
        b: f64,
        tol: f64,
        max_depth: u32,
        f: &mut F,
    ) -> Result<QuadEstimate>
    where
        F: FnMut(f64) -> (f64, f64),
    {
        let mut out = QuadEstimate {
            value: 0.0,
            error: 0.0,
            evaluations: 0,
        };
        let mut acc = CompensatedSum::new();
        self.adaptive_inner(a, b, tol, max_depth, f, &mut acc, &mut out)?;
        out.value = acc.value();
        Ok(out)
    }

    fn rule_pair<F>(&self, a: f64, b: f64, f: &mut F) -> (f64, f64, f64)
    where
        F: FnMut(f64) -> (f64, f64),
    {
        let coarse = self.coarse.integrate(a, b, |t| f(t).0);
        let mut magnitude = 0.0;
        let fine = self.fine.integrate(a, b, |t| {
            let (v, m) = f(t);
            magnitude += m;
            v
        });
        let width = libm::fabs(b - a);
        // the fine weights sum to 2, so the mean magnitude times the width
        // stands in for ∫ m
        (coarse, fine, width * magnitude / self.fine.len() as f64)
    }

    #[allow(clippy::too_many_arguments)]
    fn adaptive_inner<F>(
        &self,
        a: f64,
        b: f64,
        tol: f64,
        depth: u32,
        f: &mut F,
        acc: &mut CompensatedSum,
        out: &mut QuadEstimate,
    ) -> Result<()>
    where
        F: FnMut(f64) -> (f64, f64),
    {
        let (coarse, fine, magnitude) = self.rule_pair(a, b, f);
        out.evaluations += self.coarse.len() + self.fine.len();
        let diff = libm::fabs(fine - coarse);
        let rounding = 32.0 * UNIT_ROUNDOFF * (magnitude + libm::fabs(fine));
        if diff <= tol || diff <= rounding {
            acc.add(fine);
            out.error += diff.min(tol.max(rounding));
            return Ok(());
        }
        if depth == 0 {
            return Err(Error::QuadratureNonConvergence {
                difference: diff,
                tolerance: tol,
            });
        }
        let mid = 0.5 * (a + b);
        self.adaptive_inner(a, mid, 0.5 * tol, depth - 1, f, acc, out)?;
        self.adaptive_inner(mid, b, 0.5 * tol, depth - 1, f, acc, out)
    }
}

/// Fixed-order rule on `2^j` equal panels, doubling until two successive
/// panel counts agree to `tol`.
pub fn composite_doubling<F: FnMut(f64) -> f64>(
    rule: &GaussLegendre,
    a: f64,
    b: f64,
    initial_panels: usize,
    max_panels: usize,
    tol: f64,
    mut f: F,
) -> Result<QuadEstimate> {
    let composite = |panels: usize, f: &mut F| -> f64 {
        let h = (b - a) / panels as f64;
        let acc: CompensatedSum = (0..panels)
            .map(|i| {
                let lo = a + h * i as f64;
                rule.integrate(lo, lo + h, &mut *f)
            })
            .collect();
        acc.value()
    };
    let mut panels = initial_panels.max(1);
    let mut evaluations = panels * rule.len();
    let mut previous = composite(panels, &mut f);
    loop {
        if panels * 2 > max_panels {
            return Err(Error::QuadratureNonConvergence {
                difference: f64::INFINITY,
                tolerance: tol,
            });
        }
        panels *= 2;
        evaluations += panels * rule.len();
        let current = composite(panels, &mut f);
        let diff = libm::fabs(current - previous);
        if diff <= tol {
            return Ok(QuadEstimate {
                value: current,
                error: diff,
                evaluations,
            });
        }
        previous = current;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rule_integrates_polynomials_exactly() {
        let rule = GaussLegendre::new(5);
        // degree 9 is the limit for 5 nodes
        let v = rule.integrate(0.0, 2.0, |x| libm::pow(x, 9.0));
        assert!((v - 102.4).abs() < 1e-12);
        let wsum: f64 = rule.weights().iter().sum();
        assert!((wsum - 2.0).abs() < 1e-14);
    }

    #[test]
    fn adaptive_resolves_a_narrow_peak() {
        let pair = RulePair::default();
        let est = pair
            .adaptive(0.0, 1.0, 1e-12, 40, &mut |x| {
                1.0 / (1e-4 + (x - 0.3) * (x - 0.3))
            })
            .unwrap();
        let exact = 100.0 * (libm::atan(70.0) + libm::atan(30.0));
        assert!((est.value - exact).abs() < 1e-10 * exact);
        assert!(est.evaluations > 60);
    }

    #[test]
    fn doubling_converges_on_oscillatory_integrand() {
        let rule = GaussLegendre::new(20);
        let est = composite_doubling(&rule, 0.0, core::f64::consts::PI, 1, 1 << 12, 1e-13, |t| {
            libm::cos(40.0 * t) * libm::cos(40.0 * t)
        })
        .unwrap();
        assert!((est.value - core::f64::consts::FRAC_PI_2).abs() < 1e-12);
    }
}
