//! Uniform scalar (PCM) quantization of frame coefficients.

use alloc::format;
use alloc::vec::Vec;

use crate::frames::{norm, UnitNormFrame};
use crate::numeric::frac;
use crate::{Error, Result};

/// Alphabet `δZ`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct QuantScheme {
    delta: f64,
}

impl QuantScheme {
    pub fn new(delta: f64) -> Result<Self> {
        if !(delta.is_finite() && delta > 0.0) {
            return Err(Error::invalid(format!(
                "step δ must be positive and finite, got {delta}"
            )));
        }
        Ok(Self { delta })
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }
}

/// A signal with its norm `r`, ratio `R = r/δ` and `ε = R − ⌊R⌋`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SignalSpec {
    pub x: Vec<f64>,
    pub r: f64,
    pub ratio: f64,
    pub eps: f64,
}

impl SignalSpec {
    pub fn new(x: Vec<f64>, scheme: QuantScheme) -> Result<Self> {
        if x.is_empty() || x.iter().any(|c| !c.is_finite()) {
            return Err(Error::invalid("signal must be a nonempty finite vector"));
        }
        let r = norm(&x);
        let ratio = r / scheme.delta();
        Ok(Self {
            x,
            r,
            ratio,
            eps: frac(ratio),
        })
    }

    /// `r · u/‖u‖`.
    pub fn along(direction: &[f64], r: f64, scheme: QuantScheme) -> Result<Self> {
        let n = norm(direction);
        if !(n > 0.0) || !(r >= 0.0) {
            return Err(Error::invalid(
                "direction must be nonzero and r nonnegative",
            ));
        }
        Self::new(direction.iter().map(|c| r * c / n).collect(), scheme)
    }

    pub fn dim(&self) -> usize {
        self.x.len()
    }
}

/// `Q_δ(t) = δ ⌊t/δ + 1/2⌋`; ties round up.
pub fn pcm_quantize(t: f64, scheme: QuantScheme) -> f64 {
    let d = scheme.delta();
    d * libm::floor(t / d + 0.5)
}

/// `Δ_δ(t) = t − Q_δ(t)`, in `[−δ/2, δ/2)`.
pub fn quant_error(t: f64, scheme: QuantScheme) -> f64 {
    t - pcm_quantize(t, scheme)
}

/// Linear reconstruction from quantized coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct Reconstruction {
    pub reconstruction: Vec<f64>,
    /// `‖x − x̃‖₂`.
    pub error: f64,
    /// `(d/N) ‖Σ Δ_δ(⟨x, e_j⟩) e_j‖₂`; equals `error` for exactly tight frames.
    pub residual_error: f64,
}

/// `x̃ = (d/N) Σ Q_δ(⟨x, e_j⟩) e_j` and its error.
pub fn quantize_and_reconstruct(
    x: &SignalSpec,
    frame: &UnitNormFrame,
    scheme: QuantScheme,
) -> Result<Reconstruction> {
    if x.dim() != frame.dim() {
        return Err(Error::DimensionMismatch {
            expected: frame.dim(),
            got: x.dim(),
        });
    }
    let coeffs = frame.analyze(&x.x)?;
    let quantized: Vec<f64> = coeffs.iter().map(|&t| pcm_quantize(t, scheme)).collect();
    let residuals: Vec<f64> = coeffs.iter().zip(&quantized).map(|(t, q)| t - q).collect();
    let reconstruction = frame.synthesize(&quantized)?;
    let diff: Vec<f64> =
        x.x.iter()
            .zip(&reconstruction)
            .map(|(a, b)| a - b)
            .collect();
    let residual_error = norm(&frame.synthesize(&residuals)?);
    Ok(Reconstruction {
        reconstruction,
        error: norm(&diff),
        residual_error,
    })
}

/// White-noise mean square error `d² δ² / (12 N)`.
pub fn wnh_mse(dim: usize, count: usize, scheme: QuantScheme) -> Result<f64> {
    if dim == 0 || count == 0 {
        return Err(Error::invalid("d and N must be positive"));
    }
    let d = dim as f64;
    Ok(d * d * scheme.delta() * scheme.delta() / (12.0 * count as f64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frames::harmonic_frame_2d;
    use proptest::prelude::*;

    fn s(d: f64) -> QuantScheme {
        QuantScheme::new(d).unwrap()
    }

    #[test]
    fn quantizer_examples() {
        assert_eq!(pcm_quantize(0.4, s(1.0)), 0.0);
        assert_eq!(pcm_quantize(0.5, s(1.0)), 1.0);
        assert_eq!(pcm_quantize(0.3, s(0.5)), 0.5);
        assert_eq!(quant_error(0.4, s(1.0)), 0.4);
        assert_eq!(quant_error(0.5, s(1.0)), -0.5);
        assert!((quant_error(7.3, s(1.0)) - 0.3).abs() < 1e-15);
        assert!(QuantScheme::new(0.0).is_err());
        assert!(QuantScheme::new(f64::NAN).is_err());
    }

    #[test]
    fn reconstruction_examples() {
        let f = harmonic_frame_2d(4).unwrap();
        let x = SignalSpec::new(alloc::vec![0.3, 0.0], s(1.0)).unwrap();
        let out = quantize_and_reconstruct(&x, &f, s(1.0)).unwrap();
        assert_eq!(out.reconstruction, alloc::vec![0.0, 0.0]);
        assert!((out.error - 0.3).abs() < 1e-15);

        let zero = SignalSpec::new(alloc::vec![0.0, 0.0], s(1.0)).unwrap();
        assert_eq!(
            quantize_and_reconstruct(&zero, &f, s(1.0)).unwrap().error,
            0.0
        );

        let fine = quantize_and_reconstruct(
            &SignalSpec::new(alloc::vec![0.7, -0.2], s(1e-9)).unwrap(),
            &harmonic_frame_2d(50).unwrap(),
            s(1e-9),
        )
        .unwrap();
        assert!(fine.error <= 2.0 * 1e-9 / 2.0);

        let wrong = SignalSpec::new(alloc::vec![1.0, 2.0, 3.0], s(1.0)).unwrap();
        assert!(matches!(
            quantize_and_reconstruct(&wrong, &f, s(1.0)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn signal_spec_fields() {
        let x = SignalSpec::new(alloc::vec![3.0, 4.0], s(2.0)).unwrap();
        assert_eq!((x.r, x.ratio, x.eps), (5.0, 2.5, 0.5));
    }

    #[test]
    fn wnh_examples() {
        assert!((wnh_mse(2, 100, s(0.1)).unwrap() - 3.3333333333333335e-5).abs() < 1e-18);
        // d²δ²/(12N) with d = 1, N = 12, δ = 1
        assert_eq!(wnh_mse(1, 12, s(1.0)).unwrap(), 1.0 / 144.0);
        assert_eq!(wnh_mse(3, 1, s(2.0)).unwrap(), 3.0);
    }

    proptest! {
        #[test]
        fn error_is_bounded_and_periodic(t in -1e4f64..1e4, delta in 1e-3f64..1e2) {
            let sc = s(delta);
            let e = quant_error(t, sc);
            prop_assert!(e.abs() <= delta / 2.0 * (1.0 + 1e-12));
            let shifted = quant_error(t + delta, sc);
            prop_assert!((shifted - e).abs() <= 1e-12 * (t.abs() + delta));
        }

        #[test]
        fn quantized_values_are_grid_points(t in -1e6f64..1e6, delta in 1e-3f64..1e3) {
            // δ·k / δ may land one ulp off k
            let q = pcm_quantize(t, s(delta)) / delta;
            prop_assert!((q - libm::round(q)).abs() <= 2.0 * f64::EPSILON * q.abs());
        }

        #[test]
        fn scale_covariance(t in -1e3f64..1e3, delta in 1e-2f64..1e2, k in 0i32..8) {
            let scale = libm::pow(2.0, k as f64);
            prop_assert_eq!(pcm_quantize(scale * t, s(scale * delta)), scale * pcm_quantize(t, s(delta)));
        }

        #[test]
        fn tight_frame_error_forms_agree(n in 3usize..200, x in -20.0f64..20.0, y in -20.0f64..20.0, delta in 0.01f64..3.0) {
            let f = harmonic_frame_2d(n).unwrap();
            let sig = SignalSpec::new(alloc::vec![x, y], s(delta)).unwrap();
            let out = quantize_and_reconstruct(&sig, &f, s(delta)).unwrap();
            prop_assert!((out.error - out.residual_error).abs() <= 1e-10 * (1.0 + x.abs() + y.abs()));
        }
    }
}
