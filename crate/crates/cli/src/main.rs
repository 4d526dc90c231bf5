use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use wiener_chaos::report::{emit_report, write_report, ReportFormat};
use wiener_chaos::{run_suite, RunConfig};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Csv,
}

impl From<Format> for ReportFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Json => ReportFormat::Json,
            Format::Csv => ReportFormat::Csv,
        }
    }
}

/// Run Wiener chaos verification suites and emit a report.
#[derive(Debug, Parser)]
#[command(name = "wiener-chaos", version)]
struct Args {
    /// product, leibniz, stroock, cameron-martin, isometry-mc, ito-convergence or all
    #[arg(long, default_value = "all")]
    suite: String,
    #[arg(long, default_value_t = 3)]
    dim: usize,
    /// Largest combined order of any product formed
    #[arg(long, default_value_t = 8)]
    max_order: usize,
    #[arg(long, default_value_t = 200)]
    trials: u64,
    #[arg(long, default_value_t = 100_000)]
    paths: u64,
    /// Number of grid steps on [0, 1]
    #[arg(long, default_value_t = 64)]
    grid: usize,
    #[arg(long, env = "CHAOS_SEED", default_value_t = 42)]
    seed: u64,
    /// Override for the algebraic tolerance
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Write the report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// Simulate Monte Carlo paths in parallel
    #[arg(long)]
    parallel: bool,
    /// Record wall time in the report (makes it non-reproducible)
    #[arg(long)]
    timing: bool,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let config = RunConfig {
        suite: args.suite,
        dim: args.dim,
        max_order: args.max_order,
        trials: args.trials,
        paths: args.paths,
        grid: args.grid,
        seed: args.seed,
        tol: args.tol,
        parallel: args.parallel,
        timing: args.timing,
    };
    let format = ReportFormat::from(args.format);
    let report = match run_suite(&config) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let written = match &args.out {
        Some(path) => write_report(&report, format, path),
        None => emit_report(&report, format).map(|s| print!("{s}")),
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    for case in report.failures() {
        eprintln!(
            "FAIL {} observed {:e} > {:e}",
            case.name, case.observed, case.threshold
        );
    }
    if report.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
