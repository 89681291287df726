//! Unit-norm frames on the sphere and their tightness/equidistribution
//! diagnostics.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::numeric::{frac, CompensatedSum};
use crate::{Error, Result};

/// Norm used for the tightness defect.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum DefectNorm {
    Frobenius,
}

/// `N` unit vectors in `R^d`, stored row-major.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct UnitNormFrame {
    dim: usize,
    vectors: Vec<f64>,
    tightness_defect: f64,
    defect_norm: DefectNorm,
}

const NORM_TOLERANCE: f64 = 1e-12;

impl UnitNormFrame {
    /// Wraps row-major vectors; each must already have unit norm to 1e-12.
    pub fn from_rows(dim: usize, vectors: Vec<f64>) -> Result<Self> {
        if dim < 2 {
            return Err(Error::invalid(format!(
                "frame dimension must be at least 2, got {dim}"
            )));
        }
        if !vectors.len().is_multiple_of(dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: vectors.len() % dim,
            });
        }
        let count = vectors.len() / dim;
        if count < dim {
            return Err(Error::invalid(format!(
                "a frame in R^{dim} needs at least {dim} vectors, got {count}"
            )));
        }
        for (j, v) in vectors.chunks_exact(dim).enumerate() {
            let norm = libm::sqrt(v.iter().map(|c| c * c).sum::<f64>());
            if !(libm::fabs(norm - 1.0) <= NORM_TOLERANCE) {
                return Err(Error::invalid(format!("vector {j} has norm {norm}")));
            }
        }
        let tightness_defect = frobenius_defect(dim, &vectors);
        Ok(Self {
            dim,
            vectors,
            tightness_defect,
            defect_norm: DefectNorm::Frobenius,
        })
    }

    fn from_unnormalized(dim: usize, mut vectors: Vec<f64>) -> Result<Self> {
        for v in vectors.chunks_exact_mut(dim) {
            normalize(v);
        }
        Self::from_rows(dim, vectors)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn count(&self) -> usize {
        self.vectors.len() / self.dim
    }

    pub fn vector(&self, j: usize) -> &[f64] {
        &self.vectors[j * self.dim..(j + 1) * self.dim]
    }

    pub fn iter(&self) -> core::slice::ChunksExact<'_, f64> {
        self.vectors.chunks_exact(self.dim)
    }

    pub fn as_rows(&self) -> &[f64] {
        &self.vectors
    }

    /// `‖(d/N) Σ e_j e_jᵀ − I‖`.
    pub fn tightness_defect(&self) -> f64 {
        self.tightness_defect
    }

    pub fn defect_norm(&self) -> DefectNorm {
        self.defect_norm
    }

    /// `(d/N) Σ ⟨x, e_j⟩ e_j`.
    pub fn synthesize(&self, coefficients: &[f64]) -> Result<Vec<f64>> {
        if coefficients.len() != self.count() {
            return Err(Error::DimensionMismatch {
                expected: self.count(),
                got: coefficients.len(),
            });
        }
        let mut acc = vec![CompensatedSum::new(); self.dim];
        for (e, &c) in self.iter().zip(coefficients) {
            for (a, &ei) in acc.iter_mut().zip(e) {
                a.add(c * ei);
            }
        }
        let scale = self.dim as f64 / self.count() as f64;
        Ok(acc.iter().map(|a| scale * a.value()).collect())
    }

    /// `⟨x, e_j⟩` for every frame vector.
    pub fn analyze(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: x.len(),
            });
        }
        Ok(self.iter().map(|e| dot(e, x)).collect())
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(v: &[f64]) -> f64 {
    libm::sqrt(dot(v, v))
}

fn normalize(v: &mut [f64]) {
    let n = norm(v);
    for c in v.iter_mut() {
        *c /= n;
    }
}

fn frobenius_defect(dim: usize, vectors: &[f64]) -> f64 {
    let count = vectors.len() / dim;
    let scale = dim as f64 / count as f64;
    let mut total = 0.0;
    for a in 0..dim {
        for b in a..dim {
            let s: CompensatedSum = vectors.chunks_exact(dim).map(|e| e[a] * e[b]).collect();
            let entry = scale * s.value() - if a == b { 1.0 } else { 0.0 };
            total += if a == b {
                entry * entry
            } else {
                2.0 * entry * entry
            };
        }
    }
    libm::sqrt(total)
}

/// `(cos 2πj/N, sin 2πj/N)`, exactly tight for `N ≥ 3`.
pub fn harmonic_frame_2d(count: usize) -> Result<UnitNormFrame> {
    if count < 3 {
        return Err(Error::invalid(format!(
            "harmonic frame needs N ≥ 3, got {count}"
        )));
    }
    let mut rows = Vec::with_capacity(2 * count);
    for j in 0..count {
        // reduce the angle to a fraction first so that sin/cos see small arguments
        let (s, c) = sincos_turns(j as f64 / count as f64);
        rows.push(c);
        rows.push(s);
    }
    UnitNormFrame::from_rows(2, rows)
}

/// `(sin 2πt, cos 2πt)` for `t` in turns, exact at multiples of 1/4.
fn sincos_turns(t: f64) -> (f64, f64) {
    let t = frac(t);
    let quarter = libm::round(4.0 * t);
    let rest = t - quarter / 4.0;
    let theta = 2.0 * core::f64::consts::PI * rest;
    let (s, c) = (libm::sin(theta), libm::cos(theta));
    match quarter as i64 % 4 {
        0 => (s, c),
        1 => (c, -s),
        2 => (-s, -c),
        _ => (-c, s),
    }
}

/// One standard normal pair by Box–Muller.
pub(crate) fn normal_pair<R: Rng>(rng: &mut R) -> (f64, f64) {
    // 1 − U lies in (0, 1], keeping the logarithm finite
    let u: f64 = 1.0 - rng.gen::<f64>();
    let v: f64 = rng.gen::<f64>();
    let radius = libm::sqrt(-2.0 * libm::log(u));
    let (s, c) = sincos_turns(v);
    (radius * c, radius * s)
}

/// Fills `out` with standard normals.
pub(crate) fn fill_normal<R: Rng>(rng: &mut R, out: &mut [f64]) {
    let mut chunks = out.chunks_exact_mut(2);
    for pair in &mut chunks {
        let (a, b) = normal_pair(rng);
        pair[0] = a;
        pair[1] = b;
    }
    if let [last] = chunks.into_remainder() {
        *last = normal_pair(rng).0;
    }
}

/// A uniformly distributed unit vector in `R^d`.
pub(crate) fn sphere_point<R: Rng>(rng: &mut R, out: &mut [f64]) {
    loop {
        fill_normal(rng, out);
        let n = norm(out);
        if n > 1e-150 {
            for c in out.iter_mut() {
                *c /= n;
            }
            return;
        }
    }
}

/// `N` i.i.d. uniform points of `S^{d−1}`, deterministic in `seed`.
pub fn random_sphere_frame(dim: usize, count: usize, seed: u64) -> Result<UnitNormFrame> {
    if dim < 2 || count < dim {
        return Err(Error::invalid(format!(
            "random frame needs d ≥ 2 and N ≥ d, got d={dim}, N={count}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = vec![0.0; dim * count];
    for v in rows.chunks_exact_mut(dim) {
        sphere_point(&mut rng, v);
    }
    UnitNormFrame::from_unnormalized(dim, rows)
}

/// Spherical Fibonacci lattice on `S^2`.
pub fn fibonacci_sphere_frame(count: usize) -> Result<UnitNormFrame> {
    if count < 3 {
        return Err(Error::invalid(format!(
            "Fibonacci frame needs N ≥ 3, got {count}"
        )));
    }
    let inv_golden = 2.0 / (1.0 + libm::sqrt(5.0));
    let mut rows = Vec::with_capacity(3 * count);
    for j in 0..count {
        let z = 1.0 - (2 * j + 1) as f64 / count as f64;
        let rho = libm::sqrt((1.0 - z) * (1.0 + z));
        let (s, c) = sincos_turns(frac(j as f64 * inv_golden));
        rows.extend_from_slice(&[rho * c, rho * s, z]);
    }
    UnitNormFrame::from_unnormalized(3, rows)
}

/// `∫_{S^{d−1}} z^β dν`: `∏(β_i − 1)!! / ∏_{j<|β|/2}(d + 2j)`, zero when any
/// exponent is odd.
pub fn sphere_moment(dim: usize, exponents: &[u32]) -> f64 {
    if exponents.iter().any(|&b| b % 2 == 1) {
        return 0.0;
    }
    let mut value = 1.0;
    for &b in exponents {
        let mut k = 1;
        while k < b {
            value *= k as f64;
            k += 2;
        }
    }
    let half: u32 = exponents.iter().sum::<u32>() / 2;
    for j in 0..half {
        value /= (dim + 2 * j as usize) as f64;
    }
    value
}

/// All exponent vectors of length `dim` with total degree `1..=max_degree`.
pub fn monomials(dim: usize, max_degree: u32) -> Vec<Vec<u32>> {
    fn rec(dim: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == dim {
            if cur.iter().sum::<u32>() > 0 {
                out.push(cur.clone());
            }
            return;
        }
        for b in 0..=left {
            cur.push(b);
            rec(dim, left - b, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(dim, max_degree, &mut Vec::with_capacity(dim), &mut out);
    out
}

/// `max_β |(1/N) Σ e_j^β − ∫ z^β dν|` over monomials of degree `1..=max_degree`.
pub fn equidistribution_diagnostic(frame: &UnitNormFrame, max_degree: u32) -> Result<f64> {
    if max_degree < 1 {
        return Err(Error::invalid("max_degree must be at least 1"));
    }
    let dim = frame.dim();
    let n = frame.count() as f64;
    let mut worst: f64 = 0.0;
    for beta in monomials(dim, max_degree) {
        let s: CompensatedSum = frame
            .iter()
            .map(|e| {
                e.iter()
                    .zip(&beta)
                    .map(|(&c, &b)| libm::pow(c, b as f64))
                    .product::<f64>()
            })
            .collect();
        worst = worst.max(libm::fabs(s.value() / n - sphere_moment(dim, &beta)));
    }
    Ok(worst)
}

/// Row-major `d × d` orthogonal matrix from Gram–Schmidt on a Gaussian matrix.
pub fn random_orthogonal<R: Rng>(dim: usize, rng: &mut R) -> Vec<f64> {
    let mut q = vec![0.0; dim * dim];
    let mut i = 0;
    while i < dim {
        let mut row = vec![0.0; dim];
        fill_normal(rng, &mut row);
        // two passes of modified Gram–Schmidt
        for _ in 0..2 {
            for k in 0..i {
                let prev = &q[k * dim..(k + 1) * dim];
                let p = dot(&row, prev);
                for (r, &v) in row.iter_mut().zip(prev) {
                    *r -= p * v;
                }
            }
        }
        let n = norm(&row);
        if n < 1e-8 {
            continue;
        }
        for (dst, r) in q[i * dim..(i + 1) * dim].iter_mut().zip(&row) {
            *dst = r / n;
        }
        i += 1;
    }
    q
}

/// `Q x` for row-major `Q`.
pub fn apply(matrix: &[f64], x: &[f64]) -> Vec<f64> {
    matrix
        .chunks_exact(x.len())
        .map(|row| dot(row, x))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn harmonic_four_is_the_axes() {
        let f = harmonic_frame_2d(4).unwrap();
        assert_eq!(f.as_rows(), &[1.0, 0.0, 0.0, 1.0, -1.0, 0.0, 0.0, -1.0]);
        assert_eq!(f.tightness_defect(), 0.0);
    }

    #[test]
    fn harmonic_frames_are_tight_and_balanced() {
        for n in 3..200 {
            let f = harmonic_frame_2d(n).unwrap();
            assert!(
                f.tightness_defect() < 1e-12,
                "N={n}: {}",
                f.tightness_defect()
            );
            let sx: f64 = f.iter().map(|e| e[0]).sum();
            let sy: f64 = f.iter().map(|e| e[1]).sum();
            assert!(sx.abs() < 1e-12 && sy.abs() < 1e-12);
        }
        assert!(harmonic_frame_2d(2).is_err());
    }

    #[test]
    fn harmonic_low_moments_vanish() {
        for n in 5..40 {
            let f = harmonic_frame_2d(n).unwrap();
            assert!(equidistribution_diagnostic(&f, 3).unwrap() < 1e-12);
        }
    }

    #[test]
    fn random_frame_concentrates() {
        let f = random_sphere_frame(3, 100_000, 1).unwrap();
        assert!(f.tightness_defect() < 0.05, "{}", f.tightness_defect());
        let small = random_sphere_frame(2, 10, 4).unwrap();
        for e in small.iter() {
            assert!((norm(e) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn random_frame_second_moment() {
        let n = 50_000;
        let f = random_sphere_frame(4, n, 11).unwrap();
        let u = [0.5, -0.5, 0.5, 0.5];
        let samples: Vec<f64> = f.iter().map(|e| dot(e, &u).powi(2)).collect();
        let mean = samples.iter().sum::<f64>() / n as f64;
        let var = samples.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        assert!((mean - 0.25).abs() <= 3.0 * (var / n as f64).sqrt());
    }

    #[test]
    fn random_frame_is_seed_deterministic() {
        let a = random_sphere_frame(5, 300, 42).unwrap();
        let b = random_sphere_frame(5, 300, 42).unwrap();
        let c = random_sphere_frame(5, 300, 43).unwrap();
        assert_eq!(a.as_rows(), b.as_rows());
        assert_ne!(a.as_rows(), c.as_rows());
    }

    #[test]
    fn random_discrepancy_shrinks() {
        let median = |n: usize| {
            let mut v: Vec<f64> = (0..5)
                .map(|s| {
                    equidistribution_diagnostic(&random_sphere_frame(3, n, 100 + s).unwrap(), 3)
                        .unwrap()
                })
                .collect();
            v.sort_by(f64::total_cmp);
            v[2]
        };
        let (a, b, c) = (median(1_000), median(10_000), median(100_000));
        assert!(a > b && b > c, "{a} {b} {c}");
    }

    #[test]
    fn fibonacci_frame_quality() {
        let f = fibonacci_sphere_frame(1000).unwrap();
        assert!(f.tightness_defect() < 0.01, "{}", f.tightness_defect());
        let mean: Vec<f64> = (0..3)
            .map(|a| f.iter().map(|e| e[a]).sum::<f64>() / 1000.0)
            .collect();
        assert!(norm(&mean) < 0.01);
        for e in f.iter() {
            assert!((norm(e) - 1.0).abs() < 1e-12);
        }
        assert!(equidistribution_diagnostic(&f, 4).unwrap() < 0.01);
    }

    #[test]
    fn sphere_moments_match_known_values() {
        assert_eq!(sphere_moment(3, &[2, 0, 0]), 1.0 / 3.0);
        assert_eq!(sphere_moment(3, &[4, 0, 0]), 1.0 / 5.0);
        assert_eq!(sphere_moment(3, &[2, 2, 0]), 1.0 / 15.0);
        assert_eq!(sphere_moment(2, &[2, 2]), 1.0 / 8.0);
        assert_eq!(sphere_moment(4, &[1, 2, 0, 0]), 0.0);
        assert_eq!(monomials(2, 2).len(), 5);
    }

    #[test]
    fn unit_norm_is_enforced() {
        assert!(UnitNormFrame::from_rows(2, vec![1.0, 0.0, 0.0, 1.1]).is_err());
        assert!(UnitNormFrame::from_rows(2, vec![1.0, 0.0, 0.0]).is_err());
        assert!(UnitNormFrame::from_rows(3, vec![1.0, 0.0, 0.0]).is_err());
    }

    #[test]
    fn orthogonal_matrix_is_orthogonal() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for d in 2..7 {
            let q = random_orthogonal(d, &mut rng);
            for i in 0..d {
                for j in 0..d {
                    let p = dot(&q[i * d..(i + 1) * d], &q[j * d..(j + 1) * d]);
                    let want = if i == j { 1.0 } else { 0.0 };
                    assert!((p - want).abs() < 1e-13);
                }
            }
        }
    }

    proptest! {
        #[test]
        fn tight_frames_reconstruct(n in 3usize..64, x in -10.0f64..10.0, y in -10.0f64..10.0) {
            let f = harmonic_frame_2d(n).unwrap();
            let back = f.synthesize(&f.analyze(&[x, y]).unwrap()).unwrap();
            prop_assert!((back[0] - x).abs() < 1e-10 && (back[1] - y).abs() < 1e-10);
        }

        #[test]
        fn exact_tightness_any_n(n in 3usize..2000) {
            prop_assert!(harmonic_frame_2d(n).unwrap().tightness_defect() < 1e-12);
        }
    }
}
