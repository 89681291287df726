use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use pcmq::config::{
    resolve_out_dir, BesselParams, BoundsParams, Command, FrameKind, LimitParams, MethodChoice,
    ReportParams, RunConfig, SimulateParams, VerifyParams,
};
use pcmq::outcome::{RunError, EXIT_CONFIG};

/// Experiments on PCM quantization of frame expansions.
#[derive(Parser)]
#[command(name = "pcmq", version)]
struct Cli {
    /// Output directory [default: $PCMQ_OUT_DIR, else ./pcmq-out].
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Replay a saved run_config.json instead of parsing a subcommand.
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Option<Sub>,
}

#[derive(Subcommand)]
enum Sub {
    /// Exact-arithmetic identity suites.
    Verify(VerifyArgs),
    /// Bessel envelope grid with cross-route consistency.
    Bessel(BesselArgs),
    /// Limiting error by quadrature, Bessel series and Monte Carlo.
    Limit(LimitArgs),
    /// Two-sided estimates and slope fits.
    Bounds(BoundsArgs),
    /// Finite-frame reconstruction error against the limit and the white-noise model.
    Simulate(SimulateArgs),
    /// Summary and plot script over earlier runs.
    Report(ReportArgs),
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 30)]
    max: u32,
}

#[derive(Args)]
struct BesselArgs {
    #[arg(long, value_delimiter = ',', default_values_t = (1..=12).map(|i| i as f64 / 2.0).collect::<Vec<_>>())]
    orders: Vec<f64>,
    #[arg(long = "x", value_delimiter = ',', default_values_t = vec![0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 50.0])]
    arguments: Vec<f64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    All,
    Quadrature,
    BesselSeries,
    MonteCarlo,
}

#[derive(Args)]
struct LimitArgs {
    #[arg(long = "d", value_delimiter = ',', default_values_t = vec![3, 4])]
    dims: Vec<usize>,
    #[arg(long = "r", value_delimiter = ',', default_values_t = vec![10.25, 100.375])]
    radii: Vec<f64>,
    #[arg(long, default_value_t = 1.0)]
    delta: f64,
    #[arg(long, value_enum, value_delimiter = ',', default_values = ["all"])]
    methods: Vec<MethodArg>,
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    #[arg(long, default_value_t = 1_000_000)]
    samples: usize,
    #[arg(long, default_value_t = 16)]
    batches: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1e-6)]
    agreement: f64,
    #[arg(long, default_value_t = 4.0)]
    mc_sigmas: f64,
}

#[derive(Args)]
struct BoundsArgs {
    #[arg(long = "d", value_delimiter = ',', default_values_t = vec![3, 4, 5, 6])]
    dims: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_values_t = vec![0.25, 0.3, 0.375, 0.5])]
    even_eps: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_values_t = vec![1.0 / 6.0, 0.25, 1.0 / 3.0])]
    odd_eps: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_values_t = vec![100, 1000])]
    bases: Vec<u64>,
    #[arg(long, default_value_t = 1.0)]
    delta: f64,
    #[arg(long, default_value_t = pcmq_core::bounds::DEFAULT_THRESHOLD)]
    threshold: f64,
    #[arg(long, default_value_t = 1.0)]
    slope_r: f64,
    #[arg(long, default_value_t = 100)]
    k_min: u64,
    #[arg(long, default_value_t = 1000)]
    k_max: u64,
    #[arg(long, default_value_t = 12)]
    k_points: usize,
    #[arg(long, default_value_t = 0.05)]
    slope_tol: f64,
}

#[derive(Clone, Copy, ValueEnum)]
enum FrameArg {
    Fibonacci,
    Random,
    Harmonic,
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long, default_value_t = 3)]
    d: usize,
    #[arg(long = "N", default_value_t = 200_000)]
    n: usize,
    #[arg(long, default_value_t = 0.1)]
    delta: f64,
    #[arg(long = "r", value_delimiter = ',', default_values_t = vec![5.03])]
    radii: Vec<f64>,
    /// Direction of x, comma separated; defaults to (1, 2, …, d).
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    direction: Option<Vec<f64>>,
    #[arg(long, value_enum, default_value = "fibonacci")]
    frame: FrameArg,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    #[arg(long, default_value_t = 0.05)]
    rel_tol: f64,
    #[arg(long, default_value_t = 10.0)]
    wnh_factor: f64,
    /// Also write the frame, one unit vector per row.
    #[arg(long)]
    write_frame: bool,
}

#[derive(Args)]
struct ReportArgs {
    /// Directory of earlier runs [default: the output directory].
    #[arg(long)]
    input: Option<PathBuf>,
}

fn methods(args: &[MethodArg]) -> Vec<MethodChoice> {
    let mut out = Vec::new();
    for a in args {
        let add: &[MethodChoice] = match a {
            MethodArg::All => &[
                MethodChoice::Quadrature,
                MethodChoice::BesselSeries,
                MethodChoice::MonteCarlo,
            ],
            MethodArg::Quadrature => &[MethodChoice::Quadrature],
            MethodArg::BesselSeries => &[MethodChoice::BesselSeries],
            MethodArg::MonteCarlo => &[MethodChoice::MonteCarlo],
        };
        for m in add {
            if !out.contains(m) {
                out.push(*m);
            }
        }
    }
    out
}

fn command(sub: Sub) -> Command {
    match sub {
        Sub::Verify(a) => Command::Verify(VerifyParams { max: a.max }),
        Sub::Bessel(a) => Command::Bessel(BesselParams {
            orders: a.orders,
            arguments: a.arguments,
        }),
        Sub::Limit(a) => Command::Limit(LimitParams {
            dims: a.dims,
            radii: a.radii,
            delta: a.delta,
            methods: methods(&a.methods),
            tol: a.tol,
            samples: a.samples,
            batches: a.batches,
            seed: a.seed,
            agreement: a.agreement,
            mc_sigmas: a.mc_sigmas,
        }),
        Sub::Bounds(a) => Command::Bounds(BoundsParams {
            dims: a.dims,
            even_eps: a.even_eps,
            odd_eps: a.odd_eps,
            bases: a.bases,
            delta: a.delta,
            threshold: a.threshold,
            slope_r: a.slope_r,
            k_min: a.k_min,
            k_max: a.k_max,
            k_points: a.k_points,
            slope_tol: a.slope_tol,
        }),
        Sub::Simulate(a) => Command::Simulate(SimulateParams {
            d: a.d,
            n: a.n,
            delta: a.delta,
            radii: a.radii,
            direction: a.direction,
            frame: match a.frame {
                FrameArg::Fibonacci => FrameKind::Fibonacci,
                FrameArg::Random => FrameKind::Random,
                FrameArg::Harmonic => FrameKind::Harmonic,
            },
            seed: a.seed,
            rel_tol: a.rel_tol,
            wnh_factor: a.wnh_factor,
            write_frame: a.write_frame,
        }),
        Sub::Report(a) => Command::Report(ReportParams { input: a.input }),
    }
}

fn build(cli: Cli) -> Result<RunConfig, RunError> {
    match (cli.config, cli.command) {
        (Some(_), Some(_)) => Err(RunError::Config(
            "--config replays a saved run and takes no subcommand".into(),
        )),
        (Some(path), None) => {
            let mut config =
                RunConfig::load(&path).map_err(|e| RunError::Config(format!("{e:#}")))?;
            if let Some(out) = cli.out {
                config.out_dir = out;
            }
            Ok(config)
        }
        (None, Some(sub)) => Ok(RunConfig {
            out_dir: resolve_out_dir(cli.out),
            command: command(sub),
        }),
        (None, None) => Err(RunError::Config(
            "a subcommand or --config is required".into(),
        )),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            let _ = e.print();
            return ExitCode::from(EXIT_CONFIG as u8);
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
    };
    let result = build(cli).and_then(|config| pcmq::run(&config));
    match result {
        Ok(outcome) => {
            eprintln!(
                "{}: {}",
                outcome.subcommand,
                if outcome.passed {
                    "pass"
                } else {
                    "check failed"
                }
            );
            ExitCode::from(outcome.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("{}", e.diagnostic());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
