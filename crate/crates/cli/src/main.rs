use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use fractal_riccati_cli::job::{resolve, JobOverrides};
use fractal_riccati_cli::{run_job, Mode, Preset, RunError, EXIT_INVALID};

/// Solve D^ζΦ = w0 + w1·Φ + w2·Φ², Φ(0) = phi0.
#[derive(Parser, Debug)]
#[command(name = "fractal-riccati", version)]
struct Args {
    /// Fractal order, 0 < zeta <= 1.
    #[arg(long, allow_negative_numbers = true)]
    zeta: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    w0: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    w1: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    w2: Option<f64>,
    /// Initial value Φ(0).
    #[arg(long, allow_negative_numbers = true)]
    phi0: Option<f64>,
    /// Right end of the sampling interval.
    #[arg(long, allow_negative_numbers = true)]
    mu_max: Option<f64>,
    /// Number of grid points, including both ends.
    #[arg(long)]
    grid: Option<usize>,
    /// Series truncation order.
    #[arg(long)]
    terms: Option<usize>,
    #[arg(long, value_enum)]
    mode: Option<Mode>,
    /// Start from a named problem; other flags override its fields.
    #[arg(long, value_enum)]
    preset: Option<Preset>,
    /// JSON job file; its fields override the flags.
    #[arg(long)]
    job: Option<PathBuf>,
    /// Write the result here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn execute(args: Args) -> Result<(), RunError> {
    let flags = JobOverrides {
        preset: args.preset,
        zeta: args.zeta,
        w0: args.w0,
        w1: args.w1,
        w2: args.w2,
        phi0: args.phi0,
        mu_max: args.mu_max,
        grid_points: args.grid,
        terms: args.terms,
        mode: args.mode,
    };
    let file = args.job.as_deref().map(JobOverrides::read).transpose()?;
    let spec = resolve(&flags, file.as_ref());
    let output = run_job(&spec)?;
    for w in &output.warnings {
        eprintln!("warning: {w}");
    }
    match &args.out {
        Some(path) => std::fs::write(path, &output.text)
            .map_err(|e| RunError::Invalid(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(output.text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| RunError::Invalid(format!("cannot write output: {e}")))
        }
    }
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_INVALID as u8)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match execute(args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
