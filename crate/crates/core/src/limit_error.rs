//! The `N → ∞` reconstruction error `d ‖∫_{S^{d−1}} Δ_δ(x·z) z dν(z)‖`.
//!
//! After rotating `x` to `r e₁` the vector integral collapses to the scalar
//! `c_d ∫_0^π Δ_δ(r cos θ) cos θ sin^{d−2} θ dθ`, computed here either by
//! breakpoint-aware quadrature or by an alternating Bessel series. A Monte
//! Carlo estimator over the sphere works directly with the vector form.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::ToPrimitive;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::combinatorics::binom;
use crate::frames::{apply, dot, norm, random_orthogonal, sphere_point};
use crate::numeric::{factorial, CompensatedSum, UNIT_ROUNDOFF};
use crate::quadrature::RulePair;
use crate::quantization::{quant_error, QuantScheme, SignalSpec};
use crate::special_fn::alternating_bessel_sum;
use crate::{Error, Result};

/// How the limit was computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Method {
    Quadrature,
    BesselSeries,
    MonteCarlo,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Quadrature => "quadrature",
            Method::BesselSeries => "bessel_series",
            Method::MonteCarlo => "monte_carlo",
        }
    }
}

/// Parity of the dimension: `d = 2n` or `d = 2n + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    /// `(parity, n)` for a dimension `d ≥ 2`.
    pub fn split(dim: usize) -> Result<(Parity, u32)> {
        if dim < 2 {
            return Err(Error::invalid(format!(
                "dimension must be at least 2, got {dim}"
            )));
        }
        let n = (dim / 2) as u32;
        Ok(if dim.is_multiple_of(2) {
            (Parity::Even, n)
        } else {
            (Parity::Odd, n)
        })
    }

    pub fn dim(self, n: u32) -> usize {
        match self {
            Parity::Even => 2 * n as usize,
            Parity::Odd => 2 * n as usize + 1,
        }
    }

    /// Power of `sin θ` in the reduced integral.
    pub fn sine_power(self, n: u32) -> u32 {
        match self {
            Parity::Even => 2 * n - 2,
            Parity::Odd => 2 * n - 1,
        }
    }
}

/// A value of the reduced one-dimensional integral.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SphereIntegral {
    pub value: f64,
    pub error_estimate: f64,
    pub method: Method,
    pub breakpoint_count: Option<usize>,
    pub truncation_k: Option<usize>,
}

/// One limiting-error evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LimitErrorResult {
    pub value: f64,
    pub method: Method,
    pub error_estimate: f64,
    pub breakpoint_count: Option<usize>,
    pub truncation_k: Option<usize>,
    pub sample_count: Option<usize>,
}

/// Default relative tolerance (against the natural scale) per evaluation.
pub const DEFAULT_TOL: f64 = 1e-10;
/// Default Monte Carlo sample count.
pub const DEFAULT_SAMPLES: usize = 1_000_000;
/// Default Monte Carlo batch count.
pub const DEFAULT_BATCHES: usize = 16;
const MAX_BISECTIONS: u32 = 30;

/// Size of the reduced integral away from the trivial regime:
/// `δ R^{−(n−1/2)}` (even) or `δ R^{−n}` (odd), capped at `r` for small `R`.
pub fn natural_scale(r: f64, delta: f64, n: u32, parity: Parity) -> f64 {
    let ratio = r / delta;
    let exponent = match parity {
        Parity::Even => n as f64 - 0.5,
        Parity::Odd => n as f64,
    };
    if ratio <= 1.0 {
        r.max(f64::MIN_POSITIVE)
    } else {
        delta * libm::pow(ratio, -exponent)
    }
}

/// `|S^{d−2}| / |S^{d−1}| = Γ(d/2) / (√π Γ((d−1)/2))`.
pub fn angular_constant(dim: usize) -> Result<f64> {
    if dim < 2 {
        return Err(Error::invalid(format!(
            "dimension must be at least 2, got {dim}"
        )));
    }
    let (mut c, mut d) = if dim.is_multiple_of(2) {
        (1.0 / core::f64::consts::PI, 2)
    } else {
        (0.5, 3)
    };
    while d < dim {
        c *= d as f64 / (d - 1) as f64;
        d += 2;
    }
    Ok(c)
}

/// `∫_0^π Δ_δ(r cos θ) cos θ sin^{2n−2} θ dθ`.
pub fn integral_even(
    r: f64,
    delta: f64,
    n: u32,
    method: Method,
    tol: f64,
) -> Result<SphereIntegral> {
    reduced_integral(r, delta, n, Parity::Even, method, tol)
}

/// `∫_0^π Δ_δ(r cos θ) cos θ sin^{2n−1} θ dθ`.
pub fn integral_odd(
    r: f64,
    delta: f64,
    n: u32,
    method: Method,
    tol: f64,
) -> Result<SphereIntegral> {
    reduced_integral(r, delta, n, Parity::Odd, method, tol)
}

/// Either parity of the reduced integral.
pub fn reduced_integral(
    r: f64,
    delta: f64,
    n: u32,
    parity: Parity,
    method: Method,
    tol: f64,
) -> Result<SphereIntegral> {
    if !(r.is_finite() && r > 0.0 && delta.is_finite() && delta > 0.0) {
        return Err(Error::invalid(format!(
            "need r > 0 and δ > 0, got r={r}, δ={delta}"
        )));
    }
    if n == 0 {
        return Err(Error::invalid("n must be at least 1"));
    }
    if !(tol > 0.0) {
        return Err(Error::invalid(format!("tolerance {tol} must be positive")));
    }
    let abs_tol = tol * natural_scale(r, delta, n, parity);
    match method {
        Method::Quadrature => quadrature_route(r, delta, parity.sine_power(n), abs_tol),
        Method::BesselSeries => series_route(r, delta, n, parity, abs_tol),
        Method::MonteCarlo => Err(Error::invalid(
            "the reduced integral has no Monte Carlo route",
        )),
    }
}

/// `θ = arccos(c)` given `1 − c` and `1 + c` separately, accurate near both ends.
fn arccos_split(one_minus: f64, one_plus: f64) -> f64 {
    if one_minus <= one_plus {
        2.0 * libm::asin(libm::sqrt(0.5 * one_minus.max(0.0)))
    } else {
        core::f64::consts::PI - 2.0 * libm::asin(libm::sqrt(0.5 * one_plus.max(0.0)))
    }
}

fn quadrature_route(r: f64, delta: f64, power: u32, abs_tol: f64) -> Result<SphereIntegral> {
    let pi = core::f64::consts::PI;
    let ratio = r / delta;
    // jumps where r cos θ = δ(j + 1/2), j from ⌊R − 1/2⌋ down to −⌊R + 1/2⌋
    let j_top = libm::floor(ratio - 0.5) as i64;
    let j_bottom = -(libm::floor(ratio + 0.5) as i64);
    // (θ, half-grid index) pairs in increasing θ
    let mut breaks: Vec<(f64, i64)> = Vec::new();
    let mut j = j_top;
    while j >= j_bottom {
        let level = delta * (j as f64 + 0.5);
        let theta = arccos_split((r - level) / r, (r + level) / r);
        if theta > 0.0 && theta < pi {
            breaks.push((theta, j));
        }
        j -= 1;
    }
    let sine = |t: f64| {
        let s = libm::sin(t);
        libm::cos(t) * libm::pow(s, power as f64)
    };
    let pair = RulePair::default();
    let pieces = breaks.len() + 1;
    let piece_tol = abs_tol / pieces as f64;
    let mut total = CompensatedSum::new();
    let mut error = 0.0;
    // leading piece [0, θ_first]: the quantizer sits one step above the first level
    let mut left = 0.0;
    for idx in 0..pieces {
        let right = if idx < breaks.len() {
            breaks[idx].0
        } else {
            pi
        };
        if right <= left {
            continue;
        }
        let est = if idx == 0 {
            match breaks.first() {
                // anchored at the right end: Δ = −δ/2 + r(cos θ − cos θ_b)
                Some(&(tb, _)) => {
                    let mut f = |t: f64| anchored(-0.5 * delta, r, tb, t, sine(t));
                    pair.adaptive_with_magnitude(left, right, piece_tol, MAX_BISECTIONS, &mut f)?
                }
                // no jumps: Δ is the identity
                None => {
                    let mut f = |t: f64| r * libm::cos(t) * sine(t);
                    pair.adaptive(left, right, piece_tol, MAX_BISECTIONS, &mut f)?
                }
            }
        } else {
            // anchored at the left end: Δ = δ/2 + r(cos θ − cos θ_a)
            let ta = breaks[idx - 1].0;
            let mut f = |t: f64| anchored(0.5 * delta, r, ta, t, sine(t));
            pair.adaptive_with_magnitude(left, right, piece_tol, MAX_BISECTIONS, &mut f)?
        };
        total.add(est.value);
        error += est.error;
        left = right;
    }
    let value = total.value();
    // breakpoint placement: each jump of size δ may be shifted by a few ulps of θ
    let placement = breaks.len() as f64 * delta * 4.0 * UNIT_ROUNDOFF * pi;
    Ok(SphereIntegral {
        value,
        error_estimate: error + placement + 4.0 * UNIT_ROUNDOFF * libm::fabs(value),
        method: Method::Quadrature,
        breakpoint_count: Some(breaks.len()),
        truncation_k: None,
    })
}

/// `(offset + r(cos t − cos t₀)) w` with the magnitude of the cancelling terms.
fn anchored(offset: f64, r: f64, t0: f64, t: f64, w: f64) -> (f64, f64) {
    let shift = 2.0 * r * libm::sin(0.5 * (t + t0)) * libm::sin(0.5 * (t - t0));
    (
        (offset - shift) * w,
        (libm::fabs(offset) + libm::fabs(shift)) * libm::fabs(w),
    )
}

/// Prefactor in front of the alternating Bessel sum, and the sum's order and
/// weight exponent.
fn series_shape(r: f64, delta: f64, n: u32, parity: Parity) -> (f64, f64, f64) {
    let pi = core::f64::consts::PI;
    let nf = n as f64;
    let ratio = r / delta;
    match parity {
        Parity::Even => {
            // −π^{−n} δ^n r^{1−n} (π/4^{n−1}) C(2n−2, n−1) (n−1)!
            let central = binom(2 * n as u64 - 2, n as i64 - 1)
                .to_f64()
                .unwrap_or(f64::INFINITY);
            let pre = -delta
                * libm::pow(ratio, 1.0 - nf)
                * libm::pow(pi, 1.0 - nf)
                * central
                * factorial(n - 1)
                / libm::pow(4.0, nf - 1.0);
            (pre, nf, nf)
        }
        Parity::Odd => {
            // −(n−1)! π^{−n} δ^{n+1/2} r^{1/2−n}
            let pre = -factorial(n - 1) * libm::pow(pi, -nf) * delta * libm::pow(ratio, 0.5 - nf);
            (pre, nf + 0.5, nf + 0.5)
        }
    }
}

fn series_route(
    r: f64,
    delta: f64,
    n: u32,
    parity: Parity,
    abs_tol: f64,
) -> Result<SphereIntegral> {
    let (pre, order, p) = series_shape(r, delta, n, parity);
    let sum = alternating_bessel_sum(order, p, r / delta, abs_tol / libm::fabs(pre))?;
    let terms = match sum.method {
        crate::special_fn::BesselMethod::AlternatingSum { terms } => Some(terms),
        _ => None,
    };
    let value = pre * sum.value;
    Ok(SphereIntegral {
        value,
        error_estimate: libm::fabs(pre) * sum.abs_error_bound
            + 8.0 * UNIT_ROUNDOFF * libm::fabs(value),
        method: Method::BesselSeries,
        breakpoint_count: None,
        truncation_k: terms,
    })
}

/// Monte Carlo partition and seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MonteCarloConfig {
    pub samples: usize,
    pub batches: usize,
    pub seed: u64,
}

impl Default for MonteCarloConfig {
    fn default() -> Self {
        Self {
            samples: DEFAULT_SAMPLES,
            batches: DEFAULT_BATCHES,
            seed: 0,
        }
    }
}

impl MonteCarloConfig {
    pub fn validate(&self) -> Result<()> {
        if self.samples < 1000 {
            return Err(Error::invalid(format!(
                "Monte Carlo needs at least 1000 samples, got {}",
                self.samples
            )));
        }
        if self.batches == 0 || self.batches > self.samples {
            return Err(Error::invalid(format!(
                "batch count {} out of range",
                self.batches
            )));
        }
        Ok(())
    }

    /// Samples assigned to batch `b`.
    pub fn batch_len(&self, b: usize) -> usize {
        self.samples / self.batches + usize::from(b < self.samples % self.batches)
    }
}

/// Running sums of `Δ_δ(x·z) z` and of its outer products.
#[derive(Debug, Clone, PartialEq)]
pub struct MonteCarloAccumulator {
    pub count: usize,
    pub sum: Vec<f64>,
    /// Row-major `d × d`.
    pub outer: Vec<f64>,
}

impl MonteCarloAccumulator {
    pub fn new(dim: usize) -> Self {
        Self {
            count: 0,
            sum: vec![0.0; dim],
            outer: vec![0.0; dim * dim],
        }
    }

    /// Batch `b` of the partition, on its own ChaCha stream.
    pub fn batch(x: &SignalSpec, scheme: QuantScheme, config: &MonteCarloConfig, b: usize) -> Self {
        let dim = x.dim();
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        rng.set_stream(b as u64);
        let mut acc = Self::new(dim);
        let mut z = vec![0.0; dim];
        let mut sum: Vec<CompensatedSum> = vec![CompensatedSum::new(); dim];
        let mut outer: Vec<CompensatedSum> = vec![CompensatedSum::new(); dim * dim];
        for _ in 0..config.batch_len(b) {
            sphere_point(&mut rng, &mut z);
            let w = quant_error(dot(&x.x, &z), scheme);
            for i in 0..dim {
                let wi = w * z[i];
                sum[i].add(wi);
                for j in 0..dim {
                    outer[i * dim + j].add(wi * w * z[j]);
                }
            }
        }
        acc.count = config.batch_len(b);
        acc.sum = sum.iter().map(CompensatedSum::value).collect();
        acc.outer = outer.iter().map(CompensatedSum::value).collect();
        acc
    }

    pub fn merge(&mut self, other: &Self) {
        self.count += other.count;
        for (a, b) in self.sum.iter_mut().zip(&other.sum) {
            *a += b;
        }
        for (a, b) in self.outer.iter_mut().zip(&other.outer) {
            *a += b;
        }
    }

    /// `d ‖mean‖` with a delta-method standard error.
    pub fn finish(&self) -> LimitErrorResult {
        let dim = self.sum.len();
        let s = self.count as f64;
        let mean: Vec<f64> = self.sum.iter().map(|v| v / s).collect();
        let cov =
            |i: usize, j: usize| (self.outer[i * dim + j] / s - mean[i] * mean[j]) * s / (s - 1.0);
        let m = norm(&mean);
        let variance = if m > 0.0 {
            let mut v = 0.0;
            for i in 0..dim {
                for j in 0..dim {
                    v += mean[i] * mean[j] * cov(i, j);
                }
            }
            v / (m * m)
        } else {
            (0..dim).map(|i| cov(i, i)).sum()
        };
        let d = dim as f64;
        LimitErrorResult {
            value: d * m,
            method: Method::MonteCarlo,
            error_estimate: d * libm::sqrt(variance.max(0.0) / s),
            breakpoint_count: None,
            truncation_k: None,
            sample_count: Some(self.count),
        }
    }
}

/// `d ‖(1/S) Σ Δ_δ(x·z_s) z_s‖` over uniform `z_s`, batches merged in index order.
pub fn monte_carlo_limit(
    x: &SignalSpec,
    scheme: QuantScheme,
    config: &MonteCarloConfig,
) -> Result<LimitErrorResult> {
    config.validate()?;
    if x.dim() < 2 {
        return Err(Error::invalid("dimension must be at least 2"));
    }
    let mut acc = MonteCarloAccumulator::new(x.dim());
    for b in 0..config.batches {
        acc.merge(&MonteCarloAccumulator::batch(x, scheme, config, b));
    }
    Ok(acc.finish())
}

/// `d c_d |integral|` by the chosen route.
pub fn limiting_error(
    x: &SignalSpec,
    scheme: QuantScheme,
    method: Method,
    tol: f64,
) -> Result<LimitErrorResult> {
    if method == Method::MonteCarlo {
        return monte_carlo_limit(x, scheme, &MonteCarloConfig::default());
    }
    limiting_error_at(x.dim(), x.r, scheme.delta(), method, tol)
}

/// Same as [`limiting_error`] given only `‖x‖`.
pub fn limiting_error_at(
    dim: usize,
    r: f64,
    delta: f64,
    method: Method,
    tol: f64,
) -> Result<LimitErrorResult> {
    let (parity, n) = Parity::split(dim)?;
    let scale = dim as f64 * angular_constant(dim)?;
    if r == 0.0 {
        return Ok(LimitErrorResult {
            value: 0.0,
            method,
            error_estimate: 0.0,
            breakpoint_count: (method == Method::Quadrature).then_some(0),
            truncation_k: None,
            sample_count: None,
        });
    }
    let integral = reduced_integral(r, delta, n, parity, method, tol)?;
    Ok(LimitErrorResult {
        value: scale * libm::fabs(integral.value),
        method,
        error_estimate: scale * integral.error_estimate,
        breakpoint_count: integral.breakpoint_count,
        truncation_k: integral.truncation_k,
        sample_count: None,
    })
}

/// Largest pairwise relative deviation of the limit over random rotations of `x`.
pub fn rotation_invariance_check(
    x: &SignalSpec,
    scheme: QuantScheme,
    rotations: usize,
    seed: u64,
    method: Method,
    tol: f64,
) -> Result<f64> {
    if rotations < 2 {
        return Err(Error::invalid("need at least two rotations"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut values = Vec::with_capacity(rotations);
    for _ in 0..rotations {
        let q = random_orthogonal(x.dim(), &mut rng);
        let rotated = SignalSpec::new(apply(&q, &x.x), scheme)?;
        let v = match method {
            Method::MonteCarlo => monte_carlo_limit(
                &rotated,
                scheme,
                &MonteCarloConfig {
                    seed,
                    ..MonteCarloConfig::default()
                },
            )?,
            _ => limiting_error(&rotated, scheme, method, tol)?,
        };
        values.push(v.value);
    }
    let mut worst: f64 = 0.0;
    for i in 0..values.len() {
        for j in i + 1..values.len() {
            let scale = libm::fabs(values[i]).max(libm::fabs(values[j]));
            if scale > 0.0 {
                worst = worst.max(libm::fabs(values[i] - values[j]) / scale);
            }
        }
    }
    Ok(worst)
}

/// `r ∫_0^π cos²θ sin^p θ dθ`, the value below the first jump (`r < δ/2`).
pub fn identity_regime_integral(r: f64, power: u32) -> f64 {
    // W_p = ∫_0^π sin^p θ dθ and ∫ cos² sin^p = W_p − W_{p+2} = W_p / (p + 2)
    let (mut wp, mut k) = if power.is_multiple_of(2) {
        (core::f64::consts::PI, 0)
    } else {
        (2.0, 1)
    };
    while k < power {
        wp *= (k + 1) as f64 / (k + 2) as f64;
        k += 2;
    }
    r * wp / (power + 2) as f64
}
