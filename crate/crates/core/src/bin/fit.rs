use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use tlsfit::cli::{run, FitRequest, Mode, OutputFormat};

/// Ordinary and total least squares fits of numeric CSV data.
#[derive(Debug, Parser)]
#[command(name = "fit", version)]
struct Args {
    /// ols | tls-line | tls-plane | tls-system | tls-multi | tls-fixed
    mode: Mode,

    /// Numeric CSV file; a non-numeric first row is skipped as a header.
    #[arg(long)]
    input: PathBuf,

    /// Number of trailing columns forming the right-hand side.
    #[arg(long, default_value_t = 1)]
    rhs_cols: usize,

    /// Number of leading columns held fixed (tls-fixed).
    #[arg(long, default_value_t = 0)]
    frozen_cols: usize,

    /// json | text
    #[arg(long, default_value = "json")]
    format: OutputFormat,

    /// Echoed into the report.
    #[arg(long)]
    seed: Option<u64>,

    /// ols: fit through the origin instead of adding an intercept column.
    #[arg(long)]
    no_intercept: bool,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let request = FitRequest {
        mode: args.mode,
        input_path: args.input,
        frozen_cols: args.frozen_cols,
        rhs_cols: args.rhs_cols,
        output_format: args.format,
        seed: args.seed,
        intercept: !args.no_intercept,
    };
    let outcome = run(&request);
    if let Some(err) = &outcome.report.error {
        eprintln!("fit {}: {}", request.mode, err.detail);
    }
    let mut stdout = std::io::stdout().lock();
    if stdout
        .write_all(outcome.render(request.output_format).as_bytes())
        .is_err()
    {
        return ExitCode::from(1);
    }
    ExitCode::from(outcome.exit_code as u8)
}
