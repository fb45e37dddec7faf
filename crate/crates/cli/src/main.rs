mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use output::Format;

/// Curvature of generalized Cheeger-Gromoll metrics on vector bundles and the
/// Atiyah algebroid of a space form.
#[derive(Parser, Debug)]
#[command(name = "cg-lab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Positivity constants C_n and bounds K(n, c).
    Constants(ConstantsArgs),
    /// Closed-form and oracle scalar curvature at one total-space point.
    Scalar(ScalarArgs),
    /// Seeded comparison of a closed form against the curvature oracle.
    Verify(VerifyArgs),
    /// Scan of the (c, k) positivity region of the Atiyah scalar curvature.
    Region(RegionArgs),
}

#[derive(Args, Debug)]
struct OutputArgs {
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Output file (standard output when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ConstantsArgs {
    /// Dimension or inclusive range `a:b`.
    #[arg(long, default_value = "2:6")]
    n: String,
    /// Comma-separated curvatures at which to evaluate K(n, c).
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    c: String,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
enum Model {
    Tm,
    Atiyah,
}

#[derive(Args, Debug)]
struct ScalarArgs {
    #[arg(long, value_enum)]
    model: Model,
    #[arg(long, default_value_t = 2)]
    n: usize,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    c: f64,
    #[arg(long)]
    k: Option<f64>,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    p: f64,
    #[arg(long, default_value_t = 1.0)]
    q: f64,
    /// Base coordinates and fiber components, `x1,…/m1,…` (origin when omitted).
    #[arg(long, allow_hyphen_values = true)]
    point: Option<String>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// One of fiber, sasaki-flat, tm-sphere, atiyah, principal, derivative.
    case: String,
    #[arg(long, default_value_t = 2)]
    n: usize,
    /// Fiber rank for the fiber and derivative cases (defaults to --n).
    #[arg(long)]
    r: Option<usize>,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    c: f64,
    #[arg(long, default_value_t = 1.0)]
    k: f64,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    p: f64,
    #[arg(long, default_value_t = 1.0)]
    q: f64,
    #[arg(long, default_value_t = 5)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    tol: Option<f64>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct RegionArgs {
    #[arg(long, default_value_t = 2)]
    n: usize,
    /// `c_min:c_max:steps`.
    #[arg(long, default_value = "-1:2:31", allow_hyphen_values = true)]
    c_range: String,
    /// `k_min:k_max:steps`.
    #[arg(long, default_value = "0.1:10:50")]
    k_range: String,
    /// Quasi-random fiber samples per cell in empirical mode.
    #[arg(long, default_value_t = 400)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// closed, empirical or both.
    #[arg(long, default_value = "both")]
    mode: String,
    #[command(flatten)]
    output: OutputArgs,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    if let Err(e) = commands::configure_threads(std::env::var("CG_LAB_THREADS").ok().as_deref()) {
        return e.report();
    }
    let (result, output) = match &cli.command {
        Command::Constants(a) => (commands::constants(a), &a.output),
        Command::Scalar(a) => (commands::scalar(a), &a.output),
        Command::Verify(a) => (commands::verify(a), &a.output),
        Command::Region(a) => (commands::region(a), &a.output),
    };
    match result {
        Ok(out) => {
            let format = output.format.unwrap_or(out.default_format);
            if let Err(e) = output::emit(&out.table.render(format), output.out.as_deref()) {
                return commands::Failure::Usage(format!("cannot write output: {e}")).report();
            }
            if out.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => e.report(),
    }
}
