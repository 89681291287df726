//! Constants and two-sided estimates for the limiting error, and empirical
//! checks of its `δ^{(d+1)/2} / r^{(d−1)/2}` rate.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::ToPrimitive;

use crate::combinatorics::binom;
use crate::limit_error::{
    angular_constant, limiting_error_at, reduced_integral, Method, Parity, DEFAULT_TOL,
};
use crate::numeric::{factorial, frac, zeta_tail};
use crate::{Error, Result};

/// Smallest `R = r/δ` at which the two-sided estimates are asserted.
pub const DEFAULT_THRESHOLD: f64 = 50.0;

/// A constant with a certified enclosure from the zeta-tail bracket.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Bracketed {
    pub value: f64,
    pub lower: f64,
    pub upper: f64,
}

impl Bracketed {
    fn affine(a: f64, b: f64, lo: f64, hi: f64) -> Self {
        // a − b·t for t ∈ [lo, hi], b > 0
        Self {
            value: a - b * 0.5 * (lo + hi),
            lower: a - b * hi,
            upper: a - b * lo,
        }
    }
}

/// `[1/4, 1/2]` for even `d`, `[1/6, 1/3]` for odd `d`.
pub fn eps_window(parity: Parity) -> (f64, f64) {
    match parity {
        Parity::Even => (0.25, 0.5),
        Parity::Odd => (1.0 / 6.0, 1.0 / 3.0),
    }
}

pub fn in_window(parity: Parity, eps: f64) -> bool {
    let (lo, hi) = eps_window(parity);
    // fractional parts of decimal inputs land within a few ulps of the ends
    let slack = 1e-12;
    eps >= lo - slack && eps <= hi + slack
}

/// `M₁ = (4/5)|cos(2πε − 3π/4)| − (5/4) Σ_{k≥2} k^{−(2n+1)/2}`.
pub fn m1_constant(eps: f64, n: u32) -> Result<Bracketed> {
    if n < 2 {
        return Err(Error::invalid(format!("M1 needs n ≥ 2, got {n}")));
    }
    m1_with_phase(eps, n, 0.75 * core::f64::consts::PI)
}

/// `M₂ = (7/8)|cos(2πε − π/2)| − (8/7) Σ_{k≥2} k^{−(n+1)}`.
pub fn m2_constant(eps: f64, n: u32) -> Result<Bracketed> {
    if n < 1 {
        return Err(Error::invalid("M2 needs n ≥ 1"));
    }
    m2_with_phase(eps, n, 0.5 * core::f64::consts::PI)
}

/// `M₁` with the phase `ω_n = (2n+1)π/4` of `J_n`; equals [`m1_constant`] for odd `n`.
pub fn m1_phase_corrected(eps: f64, n: u32) -> Result<Bracketed> {
    if n < 1 {
        return Err(Error::invalid("n must be at least 1"));
    }
    m1_with_phase(eps, n, (2 * n + 1) as f64 * core::f64::consts::FRAC_PI_4)
}

/// `M₂` with the phase `ω_{n+1/2} = (n+1)π/2` of `J_{n+1/2}`; equals
/// [`m2_constant`] for even `n`.
pub fn m2_phase_corrected(eps: f64, n: u32) -> Result<Bracketed> {
    if n < 1 {
        return Err(Error::invalid("n must be at least 1"));
    }
    m2_with_phase(eps, n, (n + 1) as f64 * core::f64::consts::FRAC_PI_2)
}

fn m1_with_phase(eps: f64, n: u32, phase: f64) -> Result<Bracketed> {
    check_eps(eps)?;
    let tail = zeta_tail(n as f64 + 0.5, 2);
    let head = 0.8 * libm::fabs(libm::cos(2.0 * core::f64::consts::PI * eps - phase));
    Ok(Bracketed::affine(head, 1.25, tail.lower, tail.upper))
}

fn m2_with_phase(eps: f64, n: u32, phase: f64) -> Result<Bracketed> {
    check_eps(eps)?;
    let tail = zeta_tail(n as f64 + 1.0, 2);
    let head = 0.875 * libm::fabs(libm::cos(2.0 * core::f64::consts::PI * eps - phase));
    Ok(Bracketed::affine(head, 8.0 / 7.0, tail.lower, tail.upper))
}

fn check_eps(eps: f64) -> Result<()> {
    if !eps.is_finite() {
        return Err(Error::invalid(format!("ε = {eps} must be finite")));
    }
    Ok(())
}

const WORST_CASE_GRID: usize = 4096;

/// Minimum of `M₁(·, n)` over its window (grid including both ends).
pub fn m1_worst_case(n: u32) -> Result<Bracketed> {
    worst_case(Parity::Even, |e| m1_constant(e, n))
}

/// Minimum of `M₂(·, n)` over its window.
pub fn m2_worst_case(n: u32) -> Result<Bracketed> {
    worst_case(Parity::Odd, |e| m2_constant(e, n))
}

fn worst_case(parity: Parity, f: impl Fn(f64) -> Result<Bracketed>) -> Result<Bracketed> {
    let (lo, hi) = eps_window(parity);
    let mut best: Option<Bracketed> = None;
    for i in 0..=WORST_CASE_GRID {
        let e = lo + (hi - lo) * i as f64 / WORST_CASE_GRID as f64;
        let v = f(e)?;
        if best.is_none_or(|b| v.value < b.value) {
            best = Some(v);
        }
    }
    Ok(best.expect("grid is nonempty"))
}

/// The two readings of the angular constant `I`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct IConstant {
    /// `d |S^{d−2}| / |S^{d−1}|`: the factor relating the reduced integral to the
    /// limit under the normalized measure.
    pub normalized: f64,
    /// `d ∏_{p=1}^{d−3} ∫_0^{2π} |sin θ|^p dθ`, read literally.
    pub literal: f64,
}

/// `I` for `d ≥ 3`; `normalized` is the one used in the lower bound.
pub fn i_constant(dim: usize) -> Result<IConstant> {
    if dim < 3 {
        return Err(Error::invalid(format!("I needs d ≥ 3, got {dim}")));
    }
    let mut literal = dim as f64;
    for p in 1..=(dim - 3) as u32 {
        literal *= 2.0 * sine_power_integral(p);
    }
    Ok(IConstant {
        normalized: dim as f64 * angular_constant(dim)?,
        literal,
    })
}

/// `∫_0^π sin^p θ dθ`.
pub fn sine_power_integral(p: u32) -> f64 {
    let (mut w, mut k) = if p.is_multiple_of(2) {
        (core::f64::consts::PI, 0)
    } else {
        (2.0, 1)
    };
    while k < p {
        w *= (k + 1) as f64 / (k + 2) as f64;
        k += 2;
    }
    w
}

/// Coefficient of `M` in the lower estimate of the reduced integral, and the
/// full upper coefficient, both in units of `δ^{(d+1)/2} / r^{(d−1)/2}`.
fn estimate_coefficients(n: u32, parity: Parity) -> (f64, f64) {
    let pi = core::f64::consts::PI;
    let nf = n as f64;
    match parity {
        Parity::Even => {
            let central = binom(2 * n as u64 - 2, n as i64 - 1)
                .to_f64()
                .unwrap_or(f64::INFINITY);
            let k = factorial(n - 1) * central / (libm::pow(4.0, nf - 1.0) * libm::pow(pi, nf));
            let zeta = 1.0 + zeta_tail(nf + 0.5, 2).upper;
            (k, 1.25 * k * zeta)
        }
        Parity::Odd => {
            let k = factorial(n - 1) / libm::pow(pi, nf + 1.0);
            let zeta = 1.0 + zeta_tail(nf + 1.0, 2).upper;
            (k, 8.0 / 7.0 * k * zeta)
        }
    }
}

/// `δ^{(d+1)/2} / r^{(d−1)/2}` written as `δ R^{−(d−1)/2}`.
pub fn rate(dim: usize, r: f64, delta: f64) -> f64 {
    delta * libm::pow(r / delta, -((dim as f64 - 1.0) / 2.0))
}

/// Lower estimate of the limit with every constant that enters it.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BoundReport {
    pub d: usize,
    pub r: f64,
    pub delta: f64,
    pub eps: f64,
    /// `C · δ^{(d+1)/2} / r^{(d−1)/2}`, or 0 outside the window.
    pub lower: f64,
    /// The matching upper estimate lifted by the same angular factor.
    pub upper_scaling: f64,
    /// `M₁` (even `d`) or `M₂` (odd `d`).
    pub m: f64,
    pub i_const: f64,
    pub i_literal: f64,
    /// `C_{1,d}` or `C_{2,d}`.
    pub c_const: f64,
    pub window_ok: bool,
    /// `M` with the Bessel phase of the actual order.
    pub m_phase_corrected: f64,
    pub lower_phase_corrected: f64,
}

/// The lower estimate at `(d, r, δ)`; reported, not extrapolated, outside the window.
pub fn lower_bound(dim: usize, r: f64, delta: f64) -> Result<BoundReport> {
    if dim < 3 {
        return Err(Error::invalid(format!(
            "the lower estimate needs d ≥ 3, got {dim}"
        )));
    }
    if !(r > 0.0 && delta > 0.0 && r.is_finite() && delta.is_finite()) {
        return Err(Error::invalid(format!(
            "need r > 0 and δ > 0, got r={r}, δ={delta}"
        )));
    }
    let (parity, n) = Parity::split(dim)?;
    let eps = frac(r / delta);
    let (m, m_fix) = match parity {
        Parity::Even => (
            m1_constant(eps, n)?.value,
            m1_phase_corrected(eps, n)?.value,
        ),
        Parity::Odd => (
            m2_constant(eps, n)?.value,
            m2_phase_corrected(eps, n)?.value,
        ),
    };
    let i = i_constant(dim)?;
    let (k, upper_k) = estimate_coefficients(n, parity);
    let c_const = k * m * i.normalized;
    let window_ok = in_window(parity, eps);
    let scale = rate(dim, r, delta);
    Ok(BoundReport {
        d: dim,
        r,
        delta,
        eps,
        lower: if window_ok { c_const * scale } else { 0.0 },
        upper_scaling: upper_k * i.normalized * scale,
        m,
        i_const: i.normalized,
        i_literal: i.literal,
        c_const,
        window_ok,
        m_phase_corrected: m_fix,
        lower_phase_corrected: if window_ok {
            (k * m_fix * i.normalized * scale).max(0.0)
        } else {
            0.0
        },
    })
}

/// Both sides of the reduced-integral estimate against the computed integral.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Sandwich {
    pub lower: f64,
    pub upper: f64,
    /// `|∫_0^π Δ_δ(r cos θ) cos θ sin^p θ dθ|`.
    pub integral: f64,
    pub integral_error: f64,
    pub holds: bool,
    /// The lower side with the Bessel phase of the actual order.
    pub lower_phase_corrected: f64,
    pub holds_phase_corrected: bool,
}

/// Checks `lower ≤ |integral| ≤ upper`; `HypothesisUnmet` outside the
/// ε-window, below `threshold`, or for `n < 2` in the even case.
pub fn two_sided_estimate(
    r: f64,
    delta: f64,
    n: u32,
    parity: Parity,
    threshold: f64,
) -> Result<Sandwich> {
    if !(r > 0.0 && delta > 0.0) {
        return Err(Error::invalid(format!(
            "need r > 0 and δ > 0, got r={r}, δ={delta}"
        )));
    }
    let ratio = r / delta;
    let eps = frac(ratio);
    if !in_window(parity, eps) {
        let (lo, hi) = eps_window(parity);
        return Err(Error::HypothesisUnmet(format!(
            "ε = {eps} outside [{lo}, {hi}]"
        )));
    }
    if ratio < threshold {
        return Err(Error::HypothesisUnmet(format!(
            "R = {ratio} below threshold {threshold}"
        )));
    }
    if parity == Parity::Even && n < 2 {
        return Err(Error::HypothesisUnmet(String::from(
            "the even estimate needs n ≥ 2",
        )));
    }
    let (m, m_fix) = match parity {
        Parity::Even => (
            m1_constant(eps, n)?.value,
            m1_phase_corrected(eps, n)?.value,
        ),
        Parity::Odd => (
            m2_constant(eps, n)?.value,
            m2_phase_corrected(eps, n)?.value,
        ),
    };
    let (k, upper_k) = estimate_coefficients(n, parity);
    let scale = rate(parity.dim(n), r, delta);
    let integral = reduced_integral(r, delta, n, parity, Method::Quadrature, DEFAULT_TOL)?;
    let value = libm::fabs(integral.value);
    let lower = k * m * scale;
    let lower_fix = k * m_fix * scale;
    let upper = upper_k * scale;
    Ok(Sandwich {
        lower,
        upper,
        integral: value,
        integral_error: integral.error_estimate,
        holds: lower <= value && value <= upper,
        lower_phase_corrected: lower_fix,
        holds_phase_corrected: lower_fix <= value && value <= upper,
    })
}

/// Least-squares line through `(ln δ_k, ln limit)`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SlopeFit {
    pub slope: f64,
    pub intercept: f64,
    /// `(k, δ_k, limit)` per sweep point.
    pub points: Vec<(u64, f64, f64)>,
}

/// `count` integers spread logarithmically over `[lo, hi]`, deduplicated.
pub fn log_spaced(lo: u64, hi: u64, count: usize) -> Vec<u64> {
    let mut out: Vec<u64> = (0..count)
        .map(|i| {
            let t = if count > 1 {
                i as f64 / (count - 1) as f64
            } else {
                0.0
            };
            libm::round(libm::exp(
                libm::log(lo as f64) * (1.0 - t) + libm::log(hi as f64) * t,
            )) as u64
        })
        .collect();
    out.dedup();
    out
}

/// Slope of `ln limit` against `ln δ_k` with `δ_k = r/(k + ε)`, which keeps
/// `ε` fixed across the sweep.
pub fn scaling_slope_fit(dim: usize, r: f64, eps: f64, ks: &[u64]) -> Result<SlopeFit> {
    let (parity, _) = Parity::split(dim)?;
    if !in_window(parity, eps) {
        let (lo, hi) = eps_window(parity);
        return Err(Error::HypothesisUnmet(format!(
            "ε = {eps} outside [{lo}, {hi}]"
        )));
    }
    if ks.len() < 4 {
        return Err(Error::invalid(format!(
            "slope fit needs at least 4 points, got {}",
            ks.len()
        )));
    }
    let mut points = Vec::with_capacity(ks.len());
    for &k in ks {
        let delta = r / (k as f64 + eps);
        let v = limiting_error_at(dim, r, delta, Method::Quadrature, DEFAULT_TOL)?;
        points.push((k, delta, v.value));
    }
    let (slope, intercept) =
        least_squares(points.iter().map(|&(_, d, v)| (libm::log(d), libm::log(v))));
    Ok(SlopeFit {
        slope,
        intercept,
        points,
    })
}

/// Ordinary least squares `y = a x + b`, returning `(a, b)`.
pub fn least_squares(data: impl Iterator<Item = (f64, f64)> + Clone) -> (f64, f64) {
    let n = data.clone().count() as f64;
    let (sx, sy) = data
        .clone()
        .fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
    let (mx, my) = (sx / n, sy / n);
    let (sxy, sxx) = data.fold((0.0, 0.0), |(a, b), (x, y)| {
        (a + (x - mx) * (y - my), b + (x - mx) * (x - mx))
    });
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn m1_examples() {
        let z = 1.341_487_257_250_917 - 1.0;
        let mid = m1_constant(0.375, 2).unwrap();
        assert!((mid.value - (0.8 - 1.25 * z)).abs() < 1e-9, "{mid:?}");
        assert!((mid.value - 0.373).abs() < 5e-4);
        let quarter = m1_constant(0.25, 2).unwrap();
        assert!((quarter.value - 0.138).abs() < 1e-3);
        let half = m1_constant(0.5, 2).unwrap();
        assert!((half.value - quarter.value).abs() < 1e-12);
        assert!(quarter.lower <= quarter.value && quarter.value <= quarter.upper);
        assert!(quarter.upper - quarter.lower < 1e-8);
        assert!(m1_constant(0.3, 1).is_err());
    }

    #[test]
    fn m2_examples() {
        let z2 = core::f64::consts::PI.powi(2) / 6.0 - 1.0;
        let sixth = m2_constant(1.0 / 6.0, 1).unwrap();
        assert!((sixth.value - 0.02).abs() < 1e-3, "{sixth:?}");
        let quarter = m2_constant(0.25, 1).unwrap();
        assert!((quarter.value - (0.875 - 8.0 / 7.0 * z2)).abs() < 1e-9);
        assert!(m2_constant(0.0, 1).unwrap().value < 0.0);
    }

    #[test]
    fn worst_cases() {
        assert!((m1_worst_case(2).unwrap().value - 0.138826).abs() < 1e-5);
        assert!((m2_worst_case(1).unwrap().value - 0.020705).abs() < 1e-5);
    }

    #[test]
    fn symmetry_and_monotonicity() {
        for i in 0..=20 {
            let t = i as f64 / 20.0 * 0.125;
            for n in 2..6 {
                let a = m1_constant(0.375 - t, n).unwrap().value;
                let b = m1_constant(0.375 + t, n).unwrap().value;
                assert!((a - b).abs() < 1e-12);
                assert!(m1_constant(0.375 - t, n + 1).unwrap().value > a);
            }
            let s = t * (1.0 / 12.0) / 0.125;
            for n in 1..6 {
                let a = m2_constant(0.25 - s, n).unwrap().value;
                let b = m2_constant(0.25 + s, n).unwrap().value;
                assert!((a - b).abs() < 1e-12);
                assert!(m2_constant(0.25 - s, n + 1).unwrap().value > a);
            }
        }
    }

    #[test]
    fn phase_corrections_agree_where_phases_coincide() {
        for &e in &[0.25, 0.3, 0.41] {
            for n in [3, 5] {
                let a = m1_constant(e, n).unwrap().value;
                let b = m1_phase_corrected(e, n).unwrap().value;
                assert!((a - b).abs() < 1e-15);
            }
            for n in [2, 4] {
                let a = m2_constant(e, n).unwrap().value;
                let b = m2_phase_corrected(e, n).unwrap().value;
                assert!((a - b).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn i_constant_readings() {
        let pi = core::f64::consts::PI;
        let three = i_constant(3).unwrap();
        assert_eq!(three.literal, 3.0);
        assert_eq!(three.normalized, 1.5);
        let four = i_constant(4).unwrap();
        assert!((four.literal - 16.0).abs() < 1e-14);
        assert!((four.normalized - 8.0 / pi).abs() < 1e-14);
        for d in 3..12 {
            let i = i_constant(d).unwrap();
            assert!(i.normalized > 0.0 && i.literal > 0.0);
        }
        assert!(i_constant(2).is_err());
    }

    #[test]
    fn sine_integrals_match_quadrature() {
        let rule = crate::quadrature::GaussLegendre::new(40);
        for p in 0..8 {
            let num: f64 = (0..16)
                .map(|i| {
                    let h = core::f64::consts::PI / 16.0;
                    rule.integrate(i as f64 * h, (i + 1) as f64 * h, |t| {
                        libm::pow(libm::sin(t), p as f64)
                    })
                })
                .sum();
            assert!((num - sine_power_integral(p)).abs() < 1e-13);
        }
    }

    #[test]
    fn outside_window_reports_zero() {
        let rep = lower_bound(4, 100.1, 1.0).unwrap();
        assert!(!rep.window_ok);
        assert_eq!(rep.lower, 0.0);
        assert!(rep.upper_scaling > 0.0);
    }

    #[test]
    fn lower_bound_is_homogeneous() {
        let a = lower_bound(5, 80.25, 1.0).unwrap();
        let b = lower_bound(5, 160.5, 2.0).unwrap();
        assert!((b.lower - 2.0 * a.lower).abs() < 1e-12 * b.lower);
    }

    #[test]
    fn four_dimensional_example_at_three_eighths() {
        // with the printed phase the even lower side exceeds the true value for n = 2
        let rep = lower_bound(4, 100.375, 1.0).unwrap();
        let limit = limiting_error_at(4, 100.375, 1.0, Method::Quadrature, 1e-10)
            .unwrap()
            .value;
        assert!(rep.window_ok);
        assert!(rep.lower > limit, "{} vs {limit}", rep.lower);
        assert!(rep.lower_phase_corrected <= limit);
        assert!(limit <= rep.upper_scaling);
    }

    #[test]
    fn sandwich_examples() {
        assert!(
            two_sided_estimate(100.25, 1.0, 2, Parity::Even, DEFAULT_THRESHOLD)
                .unwrap()
                .holds
        );
        assert!(
            two_sided_estimate(1000.25, 1.0, 3, Parity::Even, DEFAULT_THRESHOLD)
                .unwrap()
                .holds
        );
        assert!(
            two_sided_estimate(50.25, 1.0, 1, Parity::Odd, DEFAULT_THRESHOLD)
                .unwrap()
                .holds
        );
        assert!(matches!(
            two_sided_estimate(100.1, 1.0, 2, Parity::Even, DEFAULT_THRESHOLD),
            Err(Error::HypothesisUnmet(_))
        ));
        assert!(matches!(
            two_sided_estimate(10.25, 1.0, 2, Parity::Even, DEFAULT_THRESHOLD),
            Err(Error::HypothesisUnmet(_))
        ));
    }

    #[test]
    fn odd_lower_side_fails_near_the_zero_of_the_leading_term() {
        // d = 3: the limit is (3/R²)|R(ε²/2 − 1/24) − ε³/6 + ε/24| δ, which is
        // O(δ/R²) at ε = 1/√12 inside the odd window
        let eps = 1.0 / 12f64.sqrt();
        let s = two_sided_estimate(1000.0 + eps, 1.0, 1, Parity::Odd, DEFAULT_THRESHOLD).unwrap();
        assert!(!s.holds);
        assert!(s.holds_phase_corrected);
    }

    #[test]
    fn slope_for_dimension_three() {
        let fit = scaling_slope_fit(3, 1.0, 0.25, &log_spaced(100, 1000, 8)).unwrap();
        assert!((fit.slope - 2.0).abs() < 0.05, "{}", fit.slope);
        assert!(scaling_slope_fit(3, 1.0, 0.25, &[100, 200, 300]).is_err());
        assert!(scaling_slope_fit(3, 1.0, 0.5, &[100, 200, 300, 400]).is_err());
    }

    #[test]
    fn least_squares_recovers_line() {
        let pts = [(0.0, 1.0), (1.0, 3.0), (2.0, 5.0), (3.0, 7.0)];
        let (a, b) = least_squares(pts.iter().copied());
        assert!((a - 2.0).abs() < 1e-14 && (b - 1.0).abs() < 1e-14);
        assert_eq!(log_spaced(100, 1000, 3), alloc::vec![100, 316, 1000]);
    }
}
