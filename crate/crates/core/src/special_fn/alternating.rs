use alloc::format;

use super::asymptotic::envelope_constant;
use super::{bessel_j, check_order, BesselEval, BesselMethod};
use crate::numeric::{frac, hurwitz_tail, CompensatedSum, UNIT_ROUNDOFF};
use crate::{Error, Result};

/// Largest truncation point tried by [`alternating_bessel_sum`].
pub const MAX_ALTERNATING_TERMS: usize = 1 << 20;
const INITIAL_TERMS: usize = 32;
/// Landau's constant: `|J_ν(x)| ≤ 0.7858 x^{-1/3}` for `ν ≥ 0`.
const LANDAU: f64 = 0.785_746_870_4;

/// `S = Σ_{k≥1} (-1)^k k^{-p} J_α(2kπR)` to absolute accuracy `tol`.
///
/// The first `K` terms are summed with certified Bessel values. Each omitted
/// term is split by the large-argument envelope into its main part
/// `(πR^{1/2})^{-1} k^{-(p+1/2)} (-1)^k cos(2kπR − ω_α)` and a residual bounded
/// by `c μ (2kπR)^{-3/2} k^{-p}`. The main parts form a Dirichlet series on the
/// unit circle whose tail is evaluated by summation by parts (or by
/// Euler–Maclaurin when the phase is trivial), with a certified remainder.
/// `K` doubles until the total bound reaches `tol`.
pub fn alternating_bessel_sum(order: f64, p: f64, ratio: f64, tol: f64) -> Result<BesselEval> {
    if !(tol > 0.0) {
        return Err(Error::invalid(format!("tolerance {tol} must be positive")));
    }
    let mut state = SumState::new(order, p, ratio)?;
    let mut k = INITIAL_TERMS;
    let mut best: Option<BesselEval> = None;
    loop {
        state.extend_to(k)?;
        let eval = state.evaluate();
        if eval.abs_error_bound <= tol {
            return Ok(eval);
        }
        if best.is_none_or(|b| eval.abs_error_bound < b.abs_error_bound) {
            best = Some(eval);
        }
        if k >= MAX_ALTERNATING_TERMS {
            return Err(Error::PrecisionExhausted {
                achieved: best.map_or(f64::INFINITY, |b| b.abs_error_bound),
                requested: tol,
            });
        }
        k *= 2;
    }
}

/// The same sum with an explicit truncation point; the bound covers the
/// omitted tail.
pub fn alternating_bessel_sum_truncated(
    order: f64,
    p: f64,
    ratio: f64,
    terms: usize,
) -> Result<BesselEval> {
    let mut state = SumState::new(order, p, ratio)?;
    state.extend_to(terms.max(1))?;
    Ok(state.evaluate())
}

struct SumState {
    order: f64,
    p: f64,
    ratio: f64,
    terms: usize,
    head: CompensatedSum,
    head_error: f64,
}

impl SumState {
    fn new(order: f64, p: f64, ratio: f64) -> Result<Self> {
        check_order(order)?;
        if !(p.is_finite() && p >= 0.0) {
            return Err(Error::invalid(format!(
                "weight exponent {p} must be nonnegative"
            )));
        }
        if !(ratio.is_finite() && ratio > 0.0) {
            return Err(Error::invalid(format!("R = {ratio} must be positive")));
        }
        Ok(Self {
            order,
            p,
            ratio,
            terms: 0,
            head: CompensatedSum::new(),
            head_error: 0.0,
        })
    }

    fn extend_to(&mut self, terms: usize) -> Result<()> {
        let u = UNIT_ROUNDOFF;
        let omega = 0.5 * core::f64::consts::PI * self.order + 0.25 * core::f64::consts::PI;
        // envelope for |J'_α − main'| from the envelopes of J_{α±1}
        let deriv_mu = 1.25 * ((self.order + 1.0) * (self.order + 1.0) + 0.25);
        for k in self.terms + 1..=terms {
            let kf = k as f64;
            let (x, lo) = two_pi_times(kf, self.ratio);
            let j = bessel_j(self.order, x)?;
            // first-order correction for the rounding of the argument
            let scale = libm::sqrt(2.0 / (core::f64::consts::PI * x));
            let (sx, cx) = libm::sincos(x);
            let (so, co) = libm::sincos(omega);
            let slope = -scale * (sx * co - cx * so);
            let slope_cap = 2.0 * f64::max(LANDAU * libm::pow(x, -1.0 / 3.0), scale);
            let slope_err = f64::min(deriv_mu * libm::pow(x, -1.5), slope_cap) + 8.0 * u * scale;
            let value = j.value + lo * slope;
            let weight = libm::pow(kf, -self.p);
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            self.head.add(sign * weight * value);
            self.head_error += weight
                * (j.abs_error_bound
                    + libm::fabs(lo) * slope_err
                    + 8.0 * u * u * x * slope_cap
                    + 2.0 * u * libm::fabs(value));
        }
        self.terms = self.terms.max(terms);
        Ok(())
    }

    fn evaluate(&self) -> BesselEval {
        let (tail, tail_bound) = self.tail();
        let head = self.head.value();
        let value = head + tail;
        BesselEval {
            order: self.order,
            argument: self.ratio,
            value,
            abs_error_bound: self.head_error + tail_bound + 2.0 * UNIT_ROUNDOFF * libm::fabs(value),
            method: BesselMethod::AlternatingSum { terms: self.terms },
        }
    }

    /// Tail `Σ_{k>K}` as (estimate, bound).
    fn tail(&self) -> (f64, f64) {
        let pi = core::f64::consts::PI;
        let n = (self.terms + 1) as f64;
        let s = self.p + 0.5;
        let omega = 0.5 * pi * self.order + 0.25 * pi;
        let mu = libm::fabs(self.order * self.order - 0.25);
        let first_arg = 2.0 * pi * n * self.ratio;
        let (c, _) = envelope_constant(self.order, first_arg, mu);
        // Σ_{k≥N} k^{-p} c μ (2kπR)^{-3/2}
        let q = self.p + 1.5;
        let residual = if mu == 0.0 {
            0.0
        } else {
            c * mu
                * libm::pow(2.0 * pi * self.ratio, -1.5)
                * (libm::pow(n, -q) + libm::pow(n, 1.0 - q) / (q - 1.0))
        };
        let prefactor = 1.0 / (pi * libm::sqrt(self.ratio));
        let (main, main_bound) = oscillatory_tail(s, self.terms + 1, self.ratio, omega);
        (prefactor * main, prefactor * main_bound + residual)
    }
}

/// `Re[e^{-iω} Σ_{k≥N} k^{-s} z^k]` with `z = e^{i(2πR + π)}`, returned with
/// a certified bound.
fn oscillatory_tail(s: f64, start: usize, ratio: f64, omega: f64) -> (f64, f64) {
    let pi = core::f64::consts::PI;
    let n = start as f64;
    let shift = frac(ratio + 0.5);
    let crude = if s > 1.0 {
        let (v, e) = hurwitz_tail(s, start as u64);
        v + e
    } else {
        f64::INFINITY
    };
    if shift == 0.0 {
        // z = 1: the tail is cos(ω) Σ k^{-s}
        if s > 1.0 {
            let (v, e) = hurwitz_tail(s, start as u64);
            return (
                libm::cos(omega) * v,
                libm::fabs(libm::cos(omega)) * e + 4.0 * UNIT_ROUNDOFF * v,
            );
        }
        return (0.0, f64::INFINITY);
    }
    let phi = 2.0 * pi * shift;
    let z = Complex::from_angle(phi);
    let one_minus_z = Complex::new(1.0 - z.re, -z.im);
    // |1 − z| = 2|sin(φ/2)| without cancellation
    let gap = 2.0 * libm::fabs(libm::sin(0.5 * phi));
    // forward differences of a_k = k^{-s} at N
    let g1 = libm::expm1(-s * libm::log1p(1.0 / n));
    let g2 = libm::expm1(-s * libm::log1p(2.0 / n));
    let a0 = libm::pow(n, -s);
    let d1 = a0 * g1;
    let d2 = a0 * (g2 - 2.0 * g1);
    // rounding in d2 from the cancellation g2 − 2 g1
    let d2_err = a0 * 4.0 * UNIT_ROUNDOFF * (libm::fabs(g2) + 2.0 * libm::fabs(g1));
    let zn = Complex::from_angle(2.0 * pi * frac(n * (ratio + 0.5)));
    let inv = one_minus_z.recip();
    let inv2 = inv.mul(inv);
    let inv3 = inv2.mul(inv);
    let sum = inv
        .scale(a0)
        .add(z.mul(inv2).scale(d1))
        .add(z.mul(z).mul(inv3).scale(d2))
        .mul(zn);
    let rotated = sum.mul(Complex::from_angle(-omega));
    let remainder = (libm::fabs(d2) + d2_err) / (gap * gap * gap) + d2_err / (gap * gap * gap);
    let rounding = 16.0
        * UNIT_ROUNDOFF
        * (a0 / gap + libm::fabs(d1) / (gap * gap) + libm::fabs(d2) / (gap * gap * gap))
        + 2.0 * UNIT_ROUNDOFF * n * 2.0 * pi * a0 / gap;
    let bound = remainder + rounding;
    if bound < crude {
        (rotated.re, bound)
    } else {
        (0.0, crude)
    }
}

const TWO_PI_HI: f64 = core::f64::consts::TAU;
const TWO_PI_LO: f64 = 2.449_293_598_294_706_4e-16;

/// `2π k R` as an unevaluated sum `hi + lo`, accurate to a few `u² x`.
fn two_pi_times(k: f64, ratio: f64) -> (f64, f64) {
    let kr = k * ratio;
    let kr_err = libm::fma(k, ratio, -kr);
    let hi = TWO_PI_HI * kr;
    let lo = libm::fma(TWO_PI_HI, kr, -hi) + TWO_PI_HI * kr_err + TWO_PI_LO * kr;
    (hi, lo)
}

#[derive(Debug, Clone, Copy)]
struct Complex {
    re: f64,
    im: f64,
}

impl Complex {
    fn new(re: f64, im: f64) -> Self {
        Self { re, im }
    }

    fn from_angle(theta: f64) -> Self {
        Self::new(libm::cos(theta), libm::sin(theta))
    }

    fn add(self, o: Self) -> Self {
        Self::new(self.re + o.re, self.im + o.im)
    }

    fn mul(self, o: Self) -> Self {
        Self::new(
            self.re * o.re - self.im * o.im,
            self.re * o.im + self.im * o.re,
        )
    }

    fn scale(self, s: f64) -> Self {
        Self::new(self.re * s, self.im * s)
    }

    fn recip(self) -> Self {
        let d = self.re * self.re + self.im * self.im;
        Self::new(self.re / d, -self.im / d)
    }
}
