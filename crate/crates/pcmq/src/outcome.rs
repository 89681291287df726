//! Run outcomes and the exit-code contract.

use std::path::PathBuf;

use serde::Serialize;

/// Every requested check passed.
pub const EXIT_PASS: i32 = 0;
/// A check ran and failed.
pub const EXIT_CHECK_FAILED: i32 = 1;
/// The configuration was rejected before or during the run.
pub const EXIT_CONFIG: i32 = 2;
/// A numerical routine could not reach its tolerance.
pub const EXIT_PRECISION: i32 = 3;

/// What a finished subcommand reports.
#[derive(Debug, Clone, Serialize)]
pub struct Outcome {
    pub subcommand: String,
    pub passed: bool,
    pub artifacts: Vec<PathBuf>,
    pub summary: serde_json::Value,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        if self.passed {
            EXIT_PASS
        } else {
            EXIT_CHECK_FAILED
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("{0}")]
    Precision(String),
    #[error("{0:#}")]
    Io(#[from] anyhow::Error),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) | RunError::Io(_) => EXIT_CONFIG,
            RunError::Precision(_) => EXIT_PRECISION,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            RunError::Config(_) => "config",
            RunError::Precision(_) => "precision_exhausted",
            RunError::Io(_) => "io",
        }
    }

    /// One-line JSON diagnostic for stderr.
    pub fn diagnostic(&self) -> String {
        serde_json::json!({
            "error": self.kind(),
            "message": self.to_string(),
            "exit_code": self.exit_code(),
        })
        .to_string()
    }
}

impl From<pcmq_core::Error> for RunError {
    fn from(e: pcmq_core::Error) -> Self {
        use pcmq_core::Error as E;
        match e {
            E::PrecisionExhausted { .. } | E::QuadratureNonConvergence { .. } => {
                RunError::Precision(e.to_string())
            }
            E::InvalidArgument(_)
            | E::OutOfDomain(_)
            | E::DimensionMismatch { .. }
            | E::HypothesisUnmet(_) => RunError::Config(e.to_string()),
        }
    }
}
