//! Serializable run configuration. Every run writes its `RunConfig` next to
//! its outputs, and `pcmq --config run_config.json` replays it.

use std::path::{Path, PathBuf};

use anyhow::Context;
use serde::{Deserialize, Serialize};

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "PCMQ_OUT_DIR";
/// Used when neither `--out` nor the environment variable is set.
pub const DEFAULT_OUT_DIR: &str = "pcmq-out";
pub const CONFIG_FILE: &str = "run_config.json";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub out_dir: PathBuf,
    pub command: Command,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "subcommand", rename_all = "snake_case")]
pub enum Command {
    Verify(VerifyParams),
    Bessel(BesselParams),
    Limit(LimitParams),
    Bounds(BoundsParams),
    Simulate(SimulateParams),
    Report(ReportParams),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Verify(_) => "verify",
            Command::Bessel(_) => "bessel",
            Command::Limit(_) => "limit",
            Command::Bounds(_) => "bounds",
            Command::Simulate(_) => "simulate",
            Command::Report(_) => "report",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyParams {
    pub max: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BesselParams {
    pub orders: Vec<f64>,
    pub arguments: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MethodChoice {
    Quadrature,
    BesselSeries,
    MonteCarlo,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitParams {
    pub dims: Vec<usize>,
    pub radii: Vec<f64>,
    pub delta: f64,
    pub methods: Vec<MethodChoice>,
    /// Relative to the natural size of the reduced integral.
    pub tol: f64,
    pub samples: usize,
    pub batches: usize,
    pub seed: u64,
    /// Allowed relative disagreement between the deterministic routes.
    pub agreement: f64,
    /// Allowed Monte Carlo deviation in standard errors.
    pub mc_sigmas: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundsParams {
    pub dims: Vec<usize>,
    /// Even-case ε values for the sandwich grid.
    pub even_eps: Vec<f64>,
    /// Odd-case ε values for the sandwich grid.
    pub odd_eps: Vec<f64>,
    pub bases: Vec<u64>,
    pub delta: f64,
    pub threshold: f64,
    pub slope_r: f64,
    pub k_min: u64,
    pub k_max: u64,
    pub k_points: usize,
    pub slope_tol: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FrameKind {
    Fibonacci,
    Random,
    Harmonic,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulateParams {
    pub d: usize,
    pub n: usize,
    pub delta: f64,
    pub radii: Vec<f64>,
    pub direction: Option<Vec<f64>>,
    pub frame: FrameKind,
    pub seed: u64,
    pub rel_tol: f64,
    pub wnh_factor: f64,
    pub write_frame: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportParams {
    /// Directory holding earlier runs; defaults to the output directory.
    pub input: Option<PathBuf>,
}

impl RunConfig {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text =
            std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }

    pub fn save(&self, path: &Path) -> anyhow::Result<()> {
        let text = serde_json::to_string_pretty(self)?;
        std::fs::write(path, text + "\n").with_context(|| format!("writing {}", path.display()))
    }

    /// Where this subcommand's artifacts go.
    pub fn run_dir(&self) -> PathBuf {
        self.out_dir.join(self.command.name())
    }

    /// Range and consistency checks that do not need any computation.
    pub fn validate(&self) -> Result<(), String> {
        fn positive(name: &str, v: f64) -> Result<(), String> {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(format!("{name} must be positive and finite, got {v}"))
            }
        }
        match &self.command {
            Command::Verify(p) => {
                if p.max == 0 || p.max > 200 {
                    return Err(format!("--max must be in 1..=200, got {}", p.max));
                }
            }
            Command::Bessel(p) => {
                if p.orders.is_empty() || p.arguments.is_empty() {
                    return Err("bessel needs at least one order and one argument".into());
                }
                for &o in &p.orders {
                    if !(o.is_finite() && o >= 0.0) {
                        return Err(format!("order {o} must be nonnegative"));
                    }
                }
                for &x in &p.arguments {
                    positive("argument", x)?;
                }
            }
            Command::Limit(p) => {
                if p.dims.iter().any(|&d| d < 2) || p.dims.is_empty() {
                    return Err("every --d must be at least 2".into());
                }
                if p.radii.is_empty() || p.radii.iter().any(|r| !(r.is_finite() && *r >= 0.0)) {
                    return Err("every --r must be finite and nonnegative".into());
                }
                positive("--delta", p.delta)?;
                positive("--tol", p.tol)?;
                positive("--agreement", p.agreement)?;
                positive("--mc-sigmas", p.mc_sigmas)?;
                if p.methods.is_empty() {
                    return Err("no methods selected".into());
                }
                if p.methods.contains(&MethodChoice::MonteCarlo)
                    && (p.samples < 1000 || p.batches == 0 || p.batches > p.samples)
                {
                    return Err(
                        "Monte Carlo needs --samples ≥ 1000 and 1 ≤ --batches ≤ samples".into(),
                    );
                }
            }
            Command::Bounds(p) => {
                if p.dims.is_empty() || p.dims.iter().any(|&d| d < 3) {
                    return Err("every bounds --d must be at least 3".into());
                }
                positive("--delta", p.delta)?;
                positive("--threshold", p.threshold)?;
                positive("--slope-r", p.slope_r)?;
                positive("--slope-tol", p.slope_tol)?;
                if p.k_min == 0 || p.k_max <= p.k_min || p.k_points < 4 {
                    return Err("need 0 < k_min < k_max and at least 4 slope points".into());
                }
                for &e in p.even_eps.iter().chain(&p.odd_eps) {
                    if !(0.0..1.0).contains(&e) {
                        return Err(format!("ε = {e} must lie in [0, 1)"));
                    }
                }
            }
            Command::Simulate(p) => {
                if p.d < 2 || p.n < p.d {
                    return Err(format!("need d ≥ 2 and N ≥ d, got d={}, N={}", p.d, p.n));
                }
                if p.frame == FrameKind::Fibonacci && p.d != 3 {
                    return Err("the Fibonacci frame lives in d = 3".into());
                }
                if p.frame == FrameKind::Harmonic && p.d != 2 {
                    return Err("the harmonic frame lives in d = 2".into());
                }
                positive("--delta", p.delta)?;
                positive("--rel-tol", p.rel_tol)?;
                if p.radii.is_empty() || p.radii.iter().any(|r| !(r.is_finite() && *r >= 0.0)) {
                    return Err("every --r must be finite and nonnegative".into());
                }
                if let Some(dir) = &p.direction {
                    if dir.len() != p.d
                        || dir.iter().all(|c| *c == 0.0)
                        || dir.iter().any(|c| !c.is_finite())
                    {
                        return Err(format!(
                            "--direction must be a nonzero vector of length {}",
                            p.d
                        ));
                    }
                }
            }
            Command::Report(_) => {}
        }
        Ok(())
    }
}

/// `--out`, else the environment variable, else the default.
pub fn resolve_out_dir(flag: Option<PathBuf>) -> PathBuf {
    flag.or_else(|| {
        std::env::var_os(OUT_DIR_ENV)
            .filter(|v| !v.is_empty())
            .map(PathBuf::from)
    })
    .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT_DIR))
}
