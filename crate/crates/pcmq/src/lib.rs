//! Experiment driver for PCM quantization of unit-norm frames.
//!
//! Numerics live in `pcmq-core`; this crate adds the run configuration, the
//! CSV/JSON formats, parallel sweeps and the `pcmq` command line.

pub mod commands;
pub mod config;
pub mod io;
pub mod outcome;

pub use commands::run;
pub use config::RunConfig;
pub use outcome::{Outcome, RunError};
