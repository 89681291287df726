//! Exact binomial identities and the closed-form trigonometric moments used by
//! the Bessel-series reduction.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::{Error, Result};

/// Exact rational in lowest terms with positive denominator.
pub type ExactRational = BigRational;

/// Transcendental factor carried alongside an exact rational.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Scale {
    One,
    Pi,
    SqrtPi,
}

impl Scale {
    pub fn value(self) -> f64 {
        match self {
            Scale::One => 1.0,
            Scale::Pi => core::f64::consts::PI,
            Scale::SqrtPi => libm::sqrt(core::f64::consts::PI),
        }
    }
}

/// `rational · scale`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScaledConstant {
    pub rational: ExactRational,
    pub scale: Scale,
}

impl ScaledConstant {
    pub fn to_f64(&self) -> f64 {
        rational_to_f64(&self.rational) * self.scale.value()
    }
}

/// Nearest `f64` to an exact rational (via a scaled integer quotient).
pub fn rational_to_f64(q: &ExactRational) -> f64 {
    if q.is_zero() {
        return 0.0;
    }
    let num = q.numer();
    let den = q.denom();
    let shift = den.bits() as i64 - num.bits() as i64 + 64;
    let scaled = if shift >= 0 {
        (num << shift as usize) / den
    } else {
        num / (den << (-shift) as usize)
    };
    scaled.to_f64().unwrap_or(f64::NAN) * libm::pow(2.0, -shift as f64)
}

/// `C(n, k)`, zero for `k < 0` or `k > n`.
pub fn binom(n: u64, k: i64) -> BigInt {
    if k < 0 || k as u64 > n {
        return BigInt::zero();
    }
    let k = (k as u64).min(n - k as u64);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

fn binom_signed(n: i64, k: i64) -> BigInt {
    if n < 0 {
        return BigInt::zero();
    }
    binom(n as u64, k)
}

/// `n!` as a big integer.
pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * i)
}

fn sign(m: i64) -> BigInt {
    if m.is_odd() {
        -BigInt::one()
    } else {
        BigInt::one()
    }
}

fn ratio(num: BigInt, den: BigInt) -> ExactRational {
    BigRational::new(num, den)
}

/// `Σ_{m=0}^{h} (−1)^m (2m+1) C(n+h, h−m) C(n+h, h+m+1)` versus `n C(n+h, n)`.
pub fn check_identity_a(n: u32, h: u32) -> Result<bool> {
    if n == 0 {
        return Err(Error::invalid("identity A needs n ≥ 1"));
    }
    let (n, h) = (n as i64, h as i64);
    let top = n + h;
    let lhs: BigInt = (0..=h)
        .map(|m| sign(m) * (2 * m + 1) * binom_signed(top, h - m) * binom_signed(top, h + m + 1))
        .sum();
    Ok(lhs == binom_signed(top, n) * n)
}

fn identity_b_summand(h: i64, l: i64, m: i64) -> BigInt {
    sign(m) * (2 * m + 1) * binom_signed(2 * h + 1, h - m) * binom_signed(m + l, 2 * l)
}

/// `Σ_{m=l}^{h} (−1)^m (2m+1) C(2h+1, h−m) C(m+l, 2l) = 0` for `0 ≤ l < h`.
pub fn check_identity_b(h: u32, l: u32) -> Result<bool> {
    if l >= h {
        return Err(Error::invalid(format!(
            "identity B needs l < h, got h={h}, l={l}"
        )));
    }
    let (h, l) = (h as i64, l as i64);
    let sum: BigInt = (l..=h).map(|m| identity_b_summand(h, l, m)).sum();
    Ok(sum.is_zero())
}

/// `g_m = (−1)^{m+1} (h+m+1)(m−l) C(2h+1, h−m) C(m+l, 2l) / (h−l)`.
pub fn gosper_term(h: u32, l: u32, m: u32) -> Result<ExactRational> {
    if h == l {
        return Err(Error::invalid("certificate undefined for h = l"));
    }
    let (h, l, m) = (h as i64, l as i64, m as i64);
    let num = sign(m + 1)
        * (h + m + 1)
        * (m - l)
        * binom_signed(2 * h + 1, h - m)
        * binom_signed(m + l, 2 * l);
    Ok(ratio(num, BigInt::from(h - l)))
}

/// Whether `g_{m+1} − g_m` equals the identity-B summand at `m`.
pub fn gosper_certificate(h: u32, l: u32, m: u32) -> Result<bool> {
    if l >= h {
        return Err(Error::invalid(format!(
            "certificate needs l < h, got h={h}, l={l}"
        )));
    }
    if m < l || m > h {
        return Err(Error::invalid(format!(
            "certificate needs l ≤ m ≤ h, got m={m}"
        )));
    }
    let diff = gosper_term(h, l, m + 1)? - gosper_term(h, l, m)?;
    let target = BigRational::from_integer(identity_b_summand(h as i64, l as i64, m as i64));
    Ok(diff == target)
}

/// `Σ_{m=0}^{h} (−1)^m C(n+h, h−m) C(n+h, h+m) = ½C(n+h, h) + ½C(n+h, h)²`,
/// each `m` counted once.
pub fn check_gould(n: u32, h: u32) -> bool {
    let (n, h) = (n as i64, h as i64);
    let top = n + h;
    let lhs: BigInt = (0..=h)
        .map(|m| sign(m) * binom_signed(top, h - m) * binom_signed(top, h + m))
        .sum();
    let c = binom_signed(top, h);
    lhs * 2 == &c + &c * &c
}

/// `L_m = ∫_{−π}^{π} cos((2m+1)θ) cos θ sin^{2n−2} θ dθ` as a rational multiple
/// of π. Exactly zero for `m ≥ n`.
pub fn l_closed(n: u32, m: u32) -> Result<ScaledConstant> {
    if n == 0 {
        return Err(Error::invalid("L_m needs n ≥ 1"));
    }
    let (ni, mi) = (n as i64, m as i64);
    let num = sign(mi) * binom_signed(2 * ni - 2, ni + mi - 1) * (2 * mi + 1);
    let den = (BigInt::one() << (2 * n as usize - 2)) * (ni + mi);
    Ok(ScaledConstant {
        rational: ratio(num, den),
        scale: Scale::Pi,
    })
}

/// `√π / Γ(j + 3/2) = 4^{j+1} (j+1)! / (2j+2)!`.
fn sqrt_pi_over_gamma_half(j: u64) -> ExactRational {
    ratio(
        (BigInt::one() << (2 * j as usize + 2)) * factorial(j + 1),
        factorial(2 * j + 2),
    )
}

/// `D_m = ∫_0^π cos((2m+1)θ) cos θ sin^{2n−1} θ dθ`, exactly rational.
pub fn d_closed(n: u32, m: u32) -> Result<ExactRational> {
    if n == 0 {
        return Err(Error::invalid("D_m needs n ≥ 1"));
    }
    let (n, m) = (n as u64, m as u64);
    let mut acc = BigRational::zero();
    for k in 0..=m {
        let top = 2 * m + 1 - k;
        let term = ratio(
            binom(top, k as i64) * factorial(n - 1) * factorial(2 * m + 2 - 2 * k),
            BigInt::from(4 * top) * factorial(m + 1 - k),
        ) * sqrt_pi_over_gamma_half(m + n - k);
        if k % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    Ok(acc * BigInt::from(2 * m + 1))
}

/// `Σ_{m=0}^{h} L_m / ((h−m)! (h+m+1)!) = L_0 n! / (h! (h+n)!)`, π divided out.
pub fn check_l_coefficient_sum(n: u32, h: u32) -> Result<bool> {
    let mut lhs = BigRational::zero();
    for m in 0..=h {
        let l = l_closed(n, m)?.rational;
        lhs += l / factorial((h - m) as u64) / factorial((h + m + 1) as u64);
    }
    let l0 = l_closed(n, 0)?.rational;
    let rhs = l0 * factorial(n as u64) / factorial(h as u64) / factorial((h + n) as u64);
    Ok(lhs == rhs)
}

/// `Σ_{m=0}^{h} D_m / ((h−m)! (h+m+1)!) = (n−1)!/4 · 2^{2h+2n+3} (h+n+1)! / (h! (2h+2n+2)!)`.
pub fn check_d_coefficient_sum(n: u32, h: u32) -> Result<bool> {
    let mut lhs = BigRational::zero();
    for m in 0..=h {
        lhs += d_closed(n, m)? / factorial((h - m) as u64) / factorial((h + m + 1) as u64);
    }
    let (n, h) = (n as u64, h as u64);
    let rhs = ratio(
        factorial(n - 1) * (BigInt::one() << (2 * h + 2 * n + 3) as usize) * factorial(h + n + 1),
        BigInt::from(4) * factorial(h) * factorial(2 * h + 2 * n + 2),
    );
    Ok(lhs == rhs)
}

/// Outcome of one exhaustive identity suite.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SuiteReport {
    pub name: String,
    pub cases: usize,
    /// Index tuples that failed.
    pub failures: Vec<Vec<u32>>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn run_suite(
    name: &str,
    cases: impl Iterator<Item = Vec<u32>>,
    check: impl Fn(&[u32]) -> Result<bool>,
) -> Result<SuiteReport> {
    let mut report = SuiteReport {
        name: String::from(name),
        cases: 0,
        failures: Vec::new(),
    };
    for case in cases {
        report.cases += 1;
        if !check(&case)? {
            report.failures.push(case);
        }
    }
    Ok(report)
}

/// Every identity suite with indices up to `max` (the coefficient suites use
/// the smaller of `max` and 10).
pub fn verify_all(max: u32) -> Result<Vec<SuiteReport>> {
    let small = max.min(10);
    Ok(alloc::vec![
        run_suite(
            "identity_a",
            (1..=max).flat_map(|n| (0..=max).map(move |h| alloc::vec![n, h])),
            |c| check_identity_a(c[0], c[1]),
        )?,
        run_suite(
            "identity_b",
            (1..=max).flat_map(|h| (0..h).map(move |l| alloc::vec![h, l])),
            |c| check_identity_b(c[0], c[1]),
        )?,
        run_suite(
            "gosper",
            (1..=max)
                .flat_map(|h| (0..h).flat_map(move |l| (l..=h).map(move |m| alloc::vec![h, l, m]))),
            |c| gosper_certificate(c[0], c[1], c[2]),
        )?,
        run_suite(
            "gould",
            (0..=max).flat_map(|n| (0..=max).map(move |h| alloc::vec![n, h])),
            |c| Ok(check_gould(c[0], c[1])),
        )?,
        run_suite(
            "l_coefficient_sum",
            (1..=small).flat_map(|n| (0..=small).map(move |h| alloc::vec![n, h])),
            |c| check_l_coefficient_sum(c[0], c[1]),
        )?,
        run_suite(
            "d_coefficient_sum",
            (1..=small).flat_map(|n| (0..=small).map(move |h| alloc::vec![n, h])),
            |c| check_d_coefficient_sum(c[0], c[1]),
        )?,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::GaussLegendre;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> ExactRational {
        ratio(BigInt::from(n), BigInt::from(d))
    }

    /// Pascal's triangle, independent of the multiplicative formula.
    fn pascal(rows: usize) -> Vec<Vec<BigInt>> {
        let mut t: Vec<Vec<BigInt>> = alloc::vec![alloc::vec![BigInt::one()]];
        for n in 1..=rows {
            let prev = &t[n - 1];
            let mut row = alloc::vec![BigInt::one(); n + 1];
            for k in 1..n {
                row[k] = &prev[k - 1] + &prev[k];
            }
            t.push(row);
        }
        t
    }

    fn integrate(a: f64, b: f64, f: impl Fn(f64) -> f64) -> f64 {
        let rule = GaussLegendre::new(30);
        let panels = 64;
        let h = (b - a) / panels as f64;
        (0..panels)
            .map(|i| rule.integrate(a + i as f64 * h, a + (i + 1) as f64 * h, &f))
            .sum()
    }

    #[test]
    fn binomial_examples() {
        assert_eq!(binom(4, 2), BigInt::from(6));
        assert_eq!(binom(3, -1), BigInt::zero());
        assert_eq!(binom(3, 4), BigInt::zero());
        assert_eq!(binom(30, 15), BigInt::from(155_117_520u64));
    }

    #[test]
    fn binomial_matches_pascal() {
        let t = pascal(40);
        for n in 0..=40u64 {
            for k in 0..=n {
                assert_eq!(binom(n, k as i64), t[n as usize][k as usize]);
            }
        }
    }

    #[test]
    fn identity_examples() {
        assert!(check_identity_a(1, 0).unwrap());
        assert!(check_identity_a(2, 1).unwrap());
        assert!(check_identity_a(5, 7).unwrap());
        assert!(check_identity_a(0, 3).is_err());
        assert!(check_identity_b(2, 0).unwrap());
        assert!(check_identity_b(1, 0).unwrap());
        assert!(check_identity_b(12, 5).unwrap());
        assert!(check_identity_b(3, 3).is_err());
    }

    #[test]
    fn identity_b_hand_sums() {
        // 1·10 − 3·5 + 5·1
        let s: BigInt = (0..=2).map(|m| identity_b_summand(2, 0, m)).sum();
        assert_eq!(s, BigInt::zero());
        assert_eq!(identity_b_summand(2, 0, 0), BigInt::from(10));
    }

    #[test]
    fn gosper_examples() {
        assert!(gosper_certificate(2, 0, 0).unwrap());
        assert_eq!(gosper_term(2, 0, 1).unwrap(), q(10, 1));
        assert!(gosper_certificate(3, 1, 2).unwrap());
        assert!(gosper_term(4, 4, 1).is_err());
        for h in 1..8 {
            for l in 0..h {
                assert!(gosper_term(h, l, l).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn gosper_telescopes_to_identity_b() {
        for h in 1..=15u32 {
            for l in 0..h {
                let sum: BigInt = (l..=h)
                    .map(|m| identity_b_summand(h as i64, l as i64, m as i64))
                    .sum();
                let tele = gosper_term(h, l, h + 1).unwrap() - gosper_term(h, l, l).unwrap();
                assert_eq!(BigRational::from_integer(sum), tele);
            }
        }
    }

    #[test]
    fn gould_examples() {
        assert!(check_gould(2, 1));
        assert!(check_gould(0, 0));
        assert!(check_gould(4, 6));
    }

    #[test]
    fn gould_double_counting_fails() {
        // summing over m = −h..h would count m = 0 once and every other term twice
        let (n, h) = (3i64, 4i64);
        let top = n + h;
        let full: BigInt = (-h..=h)
            .map(|m| sign(m) * binom_signed(top, h - m) * binom_signed(top, h + m))
            .sum();
        let c = binom_signed(top, h);
        assert_ne!(&full * 2, &c + &c * &c);
        assert_eq!(full, c);
    }

    #[test]
    fn exhaustive_to_thirty() {
        for report in verify_all(30).unwrap() {
            assert!(report.passed(), "{report:?}");
            assert!(report.cases > 0);
        }
    }

    #[test]
    fn l_closed_examples() {
        assert_eq!(l_closed(2, 0).unwrap().rational, q(1, 4));
        assert_eq!(l_closed(2, 1).unwrap().rational, q(-1, 4));
        assert_eq!(l_closed(1, 0).unwrap().rational, q(1, 1));
        assert!(l_closed(3, 3).unwrap().rational.is_zero());
        assert_eq!(l_closed(1, 0).unwrap().scale, Scale::Pi);
    }

    #[test]
    fn d_closed_examples() {
        assert_eq!(d_closed(1, 0).unwrap(), q(2, 3));
        assert_eq!(d_closed(1, 1).unwrap(), q(-2, 5));
        assert_eq!(d_closed(2, 0).unwrap(), q(4, 15));
    }

    #[test]
    fn closed_forms_match_quadrature() {
        use core::f64::consts::PI;
        for n in 1..=6u32 {
            for m in 0..=8u32 {
                let k = (2 * m + 1) as f64;
                let l_num = integrate(-PI, PI, |t| {
                    libm::cos(k * t) * libm::cos(t) * libm::pow(libm::sin(t), (2 * n - 2) as f64)
                });
                let d_num = integrate(0.0, PI, |t| {
                    libm::cos(k * t) * libm::cos(t) * libm::pow(libm::sin(t), (2 * n - 1) as f64)
                });
                let l = l_closed(n, m).unwrap().to_f64();
                let d = rational_to_f64(&d_closed(n, m).unwrap());
                let scale = 1.0;
                assert!(
                    (l - l_num).abs() <= 1e-10 * l.abs().max(scale),
                    "L n={n} m={m}: {l} vs {l_num}"
                );
                assert!(
                    (d - d_num).abs() <= 1e-10 * d.abs().max(scale),
                    "D n={n} m={m}: {d} vs {d_num}"
                );
            }
        }
    }

    #[test]
    fn coefficient_identities() {
        for n in 1..=10 {
            for h in 0..=10 {
                assert!(check_l_coefficient_sum(n, h).unwrap(), "L sum n={n} h={h}");
            }
        }
        for n in 1..=6 {
            for h in 0..=8 {
                assert!(check_d_coefficient_sum(n, h).unwrap(), "D sum n={n} h={h}");
            }
        }
    }

    #[test]
    fn rational_conversion() {
        assert_eq!(rational_to_f64(&q(1, 3)), 1.0 / 3.0);
        assert_eq!(rational_to_f64(&q(-2, 5)), -0.4);
        let huge = ratio(factorial(40), factorial(38));
        assert_eq!(rational_to_f64(&huge), 1560.0);
    }

    proptest! {
        #[test]
        fn pascal_rule(n in 1u64..60, k in -3i64..63) {
            prop_assert_eq!(binom(n, k), binom(n - 1, k - 1) + binom(n - 1, k));
        }

        #[test]
        fn binomial_symmetry(n in 0u64..80, k in 0i64..80) {
            prop_assume!(k as u64 <= n);
            prop_assert_eq!(binom(n, k), binom(n, n as i64 - k));
        }

        #[test]
        fn identity_a_random(n in 1u32..40, h in 0u32..40) {
            prop_assert!(check_identity_a(n, h).unwrap());
        }
    }
}
