use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use fgverify::battery::run_battery;
use fgverify::report::Report;
use fgverify::runner::run_plan;
use fgverify::scenario::{load, Overrides, Tol, DEFAULT_SAMPLES, DEFAULT_SEED};

/// Numerical verifier for f-structures, pseudo-slant submanifolds and warped-product inequalities.
#[derive(Parser)]
#[command(name = "fgverify", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Sample points per check [default: 64]
    #[arg(long, global = true)]
    samples: Option<usize>,
    /// Seed for the sample points [default: 42]
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Tolerance for derivative-free identities
    #[arg(long, global = true)]
    tol_alg: Option<f64>,
    /// Tolerance for connection and curvature identities
    #[arg(long, global = true)]
    tol_curv: Option<f64>,
    /// Write the JSON report here
    #[arg(long, global = true)]
    report: Option<PathBuf>,
    /// Suppress the human-readable summary
    #[arg(long, global = true)]
    quiet: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Run the suites declared in a TOML scenario
    Run { file: PathBuf },
    /// Run the built-in reproduction battery
    ReproducePaper,
}

fn fail(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn finish(report: &Report, path: Option<&Path>, quiet: bool) -> ExitCode {
    if let Some(p) = path {
        if let Err(e) = std::fs::write(p, report.to_json()) {
            return fail(format!("cannot write {}: {e}", p.display()));
        }
    }
    if !quiet {
        print!("{}", report.human());
    }
    if report.success() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let o = Overrides { samples: cli.samples, seed: cli.seed, tol_alg: cli.tol_alg, tol_curv: cli.tol_curv };
    let report = match &cli.command {
        Command::Run { file } => {
            let text = match std::fs::read_to_string(file) {
                Ok(t) => t,
                Err(e) => return fail(format!("cannot read {}: {e}", file.display())),
            };
            let plan = match load(&text, o) {
                Ok(p) => p,
                Err(e) => return fail(e),
            };
            match run_plan(&plan) {
                Ok(r) => Report::new(&plan.name, plan.seed, plan.samples, &r),
                Err(e) => return fail(e),
            }
        }
        Command::ReproducePaper => {
            let samples = cli.samples.unwrap_or(DEFAULT_SAMPLES);
            let seed = cli.seed.unwrap_or(DEFAULT_SEED);
            if samples == 0 {
                return fail("--samples must be positive");
            }
            let d = Tol::default();
            let tol = Tol {
                algebraic: cli.tol_alg.unwrap_or(d.algebraic),
                curvature: cli.tol_curv.unwrap_or(d.curvature),
                ..d
            };
            match run_battery(samples, seed, tol) {
                Ok(r) => Report::new("reproduction battery", seed, samples, &r),
                Err(e) => return fail(e),
            }
        }
    };
    finish(&report, cli.report.as_deref(), cli.quiet)
}
