//! Small floating-point helpers shared by the numerical modules.

/// Unit roundoff of binary64.
pub const UNIT_ROUNDOFF: f64 = f64::EPSILON / 2.0;

/// Neumaier compensated summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if libm::fabs(self.sum) >= libm::fabs(value) {
            self.compensation += (self.sum - t) + value;
        } else {
            self.compensation += (value - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl core::iter::FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = CompensatedSum::new();
        for v in iter {
            acc.add(v);
        }
        acc
    }
}

/// Fractional part in `[0, 1)`.
pub fn frac(x: f64) -> f64 {
    let f = x - libm::floor(x);
    if f >= 1.0 {
        0.0
    } else {
        f
    }
}

/// `true` when `x` is a nonnegative multiple of 1/2.
pub fn is_half_integer_multiple(x: f64) -> bool {
    x.is_finite() && x >= 0.0 && libm::floor(2.0 * x) == 2.0 * x
}

/// `n!` as binary64; exact up to 22!.
pub fn factorial(n: u32) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

/// `Γ(a)` for `a` a positive multiple of 1/2, as a product that starts from
/// `Γ(1) = 1` or `Γ(1/2) = √π`.
pub fn gamma_half_integer(a: f64) -> f64 {
    debug_assert!(a > 0.0 && is_half_integer_multiple(a));
    let (mut acc, mut t) = if libm::floor(a) == a {
        (1.0, 1.0)
    } else {
        (libm::sqrt(core::f64::consts::PI), 0.5)
    };
    while t < a {
        acc *= t;
        t += 1.0;
    }
    acc
}

/// Two-sided bracket for `Σ_{k ≥ 2} k^{-p}` (p > 1): exact partial sum up to
/// `cutoff`, remainder bracketed by the integral test.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ZetaTail {
    pub lower: f64,
    pub upper: f64,
}

impl ZetaTail {
    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lower + self.upper)
    }

    pub fn half_width(&self) -> f64 {
        0.5 * (self.upper - self.lower)
    }
}

/// Cutoff used for the partial sums of the constant tails.
pub const ZETA_PARTIAL_CUTOFF: u64 = 1_000_000;

/// `Σ_{k ≥ start} k^{-p}` bracketed by Euler–Maclaurin; far cheaper than
/// [`zeta_tail_bracket`] and much tighter.
pub fn zeta_tail(p: f64, start: u64) -> ZetaTail {
    let (v, e) = hurwitz_tail(p, start);
    ZetaTail {
        lower: v - e,
        upper: v + e,
    }
}

/// `Σ_{k ≥ start} k^{-p}` bracketed as partial sum to `cutoff` plus
/// `[∫_{cutoff+1}^∞, ∫_{cutoff}^∞]`.
pub fn zeta_tail_bracket(p: f64, start: u64, cutoff: u64) -> ZetaTail {
    assert!(p > 1.0, "zeta tail needs p > 1");
    assert!(start >= 1 && cutoff >= start);
    // sum small terms last
    let mut acc = CompensatedSum::new();
    for k in (start..=cutoff).rev() {
        acc.add(libm::pow(k as f64, -p));
    }
    let partial = acc.value();
    let rounding = 4.0 * UNIT_ROUNDOFF * partial;
    let lo = libm::pow((cutoff + 1) as f64, 1.0 - p) / (p - 1.0);
    let hi = libm::pow(cutoff as f64, 1.0 - p) / (p - 1.0);
    ZetaTail {
        lower: partial + lo - rounding,
        upper: partial + hi + rounding,
    }
}

/// `Σ_{k ≥ n} k^{-s}` by Euler–Maclaurin, returning `(value, bound)`.
///
/// The summand is completely monotone so the remainder after the `k^{-s-3}`
/// correction is bounded by the next correction term.
pub fn hurwitz_tail(s: f64, n: u64) -> (f64, f64) {
    assert!(s > 1.0 && n >= 1);
    let mut acc = CompensatedSum::new();
    let mut k = n;
    // push the expansion point far enough out for the corrections to shrink
    while k < 64 {
        acc.add(libm::pow(k as f64, -s));
        k += 1;
    }
    let nf = k as f64;
    let base = libm::pow(nf, -s);
    acc.add(nf * base / (s - 1.0));
    acc.add(0.5 * base);
    acc.add(s * base / (12.0 * nf));
    acc.add(-s * (s + 1.0) * (s + 2.0) * base / (720.0 * nf * nf * nf));
    let next =
        s * (s + 1.0) * (s + 2.0) * (s + 3.0) * (s + 4.0) * base / (30240.0 * libm::pow(nf, 5.0));
    let value = acc.value();
    (
        value,
        libm::fabs(next) + 8.0 * UNIT_ROUNDOFF * libm::fabs(value),
    )
}
