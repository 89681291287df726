//! PCM quantization of unit-norm tight frame expansions.
//!
//! The crate is `no_std` (it needs `alloc`) and holds every numerical piece:
//!
//! * [`special_fn`]: certified Bessel evaluations (power series, integral
//!   representation, half-integer closed forms, Hankel expansion), the
//!   large-argument envelope and the alternating Bessel sums that give the
//!   limiting error in closed form.
//! * [`combinatorics`]: exact big-rational checks of the binomial identities,
//!   the telescoping certificate and the coefficient identities behind the
//!   Bessel-sum closed forms.
//! * [`quantization`]: the PCM quantizer `Q_δ(t) = δ⌊t/δ + 1/2⌋`, its sawtooth
//!   error, linear reconstruction and the white-noise reference MSE.
//! * [`frames`]: harmonic, random and spherical Fibonacci unit-norm frames with
//!   tightness and equidistribution diagnostics.
//! * [`limit_error`]: the `N → ∞` reconstruction error computed by
//!   breakpoint-aware quadrature, by Bessel series and by Monte Carlo.
//! * [`bounds`]: the two-sided estimates, their constants and slope fits.
//!
//! IO, the CLI and parallel sweeps live in the companion `pcmq` crate.

#![no_std]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod bounds;
pub mod combinatorics;
pub mod error;
pub mod frames;
pub mod limit_error;
pub mod numeric;
pub mod quadrature;
pub mod quantization;
pub mod special_fn;

pub use error::{Error, Result};
