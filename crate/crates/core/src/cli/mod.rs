//! Front end of the `fit` binary: CSV in, fit report out.
//!
//! Column conventions: the system modes treat the last `rhs_cols` columns of
//! the input as the right-hand side, and `tls-fixed` additionally treats the
//! first `frozen_cols` columns as error-free.

mod csv_input;
mod report;

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

pub use csv_input::{parse_csv, parse_csv_reader, parse_csv_str};
pub use report::{Coefficients, FitReport, Num, ReportError};

use crate::error::{dim_err, FitError, Result};
use crate::extensions::{solve_tls_fixed, solve_tls_multi};
use crate::geometry::{fit_hyperplane_tls, PointCloud};
use crate::linalg::{jacobi_svd, Matrix};
use crate::ols::{simple_regression, solve_ols, OlsMethod};
use crate::system::solve_tls_system;
use report::nums;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_NO_SOLUTION: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Ols,
    TlsLine,
    TlsPlane,
    TlsSystem,
    TlsMulti,
    TlsFixed,
}

impl Mode {
    pub const ALL: [Mode; 6] = [
        Mode::Ols,
        Mode::TlsLine,
        Mode::TlsPlane,
        Mode::TlsSystem,
        Mode::TlsMulti,
        Mode::TlsFixed,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Ols => "ols",
            Mode::TlsLine => "tls-line",
            Mode::TlsPlane => "tls-plane",
            Mode::TlsSystem => "tls-system",
            Mode::TlsMulti => "tls-multi",
            Mode::TlsFixed => "tls-fixed",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Mode::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| format!("unknown mode {s:?}"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Json,
    Text,
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "json" => Ok(OutputFormat::Json),
            "text" => Ok(OutputFormat::Text),
            _ => Err(format!("unknown format {s:?}")),
        }
    }
}

#[derive(Debug, Clone)]
pub struct FitRequest {
    pub mode: Mode,
    pub input_path: PathBuf,
    pub frozen_cols: usize,
    pub rhs_cols: usize,
    pub output_format: OutputFormat,
    /// Echoed into the report; every solver is deterministic.
    pub seed: Option<u64>,
    /// `ols` only: prepend an all-ones column to the regressors.
    pub intercept: bool,
}

impl FitRequest {
    pub fn new(mode: Mode, input_path: impl Into<PathBuf>) -> Self {
        Self {
            mode,
            input_path: input_path.into(),
            frozen_cols: 0,
            rhs_cols: 1,
            output_format: OutputFormat::Json,
            seed: None,
            intercept: true,
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub report: FitReport,
    pub exit_code: i32,
}

impl RunOutcome {
    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Json => self.report.to_json(),
            OutputFormat::Text => self.report.to_text(),
        }
    }
}

/// Reads the input file and runs the requested fit.
pub fn run(request: &FitRequest) -> RunOutcome {
    let outcome = parse_csv(&request.input_path).and_then(|data| run_on(request, &data));
    finish(request, outcome)
}

/// Runs the requested fit on an already loaded data matrix.
pub fn run_matrix(request: &FitRequest, data: &Matrix) -> RunOutcome {
    finish(request, run_on(request, data))
}

fn finish(request: &FitRequest, outcome: Result<FitReport>) -> RunOutcome {
    let (mut report, exit_code) = match outcome {
        Ok(r) => (r, EXIT_OK),
        Err(e) => {
            let code = match e {
                FitError::NoTlsSolution { .. } => EXIT_NO_SOLUTION,
                _ => EXIT_INPUT,
            };
            (FitReport::failure(request.mode.as_str(), &e), code)
        }
    };
    report.seed = request.seed;
    RunOutcome { report, exit_code }
}

fn split_rhs(data: &Matrix, rhs_cols: usize, min_lhs: usize) -> Result<(Matrix, Matrix)> {
    let (m, c) = data.shape();
    if rhs_cols == 0 || rhs_cols + min_lhs > c {
        return dim_err(format!(
            "{c} columns cannot hold {rhs_cols} right-hand-side column(s) and {min_lhs} more"
        ));
    }
    Ok((data.block(0..m, 0..c - rhs_cols), data.block(0..m, c - rhs_cols..c)))
}

fn run_on(request: &FitRequest, data: &Matrix) -> Result<FitReport> {
    let mode = request.mode;
    let mut report = FitReport {
        mode: mode.as_str().to_string(),
        ..Default::default()
    };
    match mode {
        Mode::Ols => {
            if request.rhs_cols != 1 {
                return dim_err("ols takes exactly one right-hand-side column");
            }
            let (x, y) = split_rhs(data, 1, 1)?;
            let y = y.column_vector(0);
            let m = x.rows();
            let a = if request.intercept {
                Matrix::from_columns(m, &[&vec![1.0; m]])?.hstack(&x)?
            } else {
                x
            };
            let sol = if request.intercept && a.cols() == 2 {
                simple_regression(&a.column_vector(1), &y)?
            } else {
                solve_ols(&a, &y, OlsMethod::Svd)?
            };
            report.singular_values = nums(jacobi_svd(&a)?.sigma.as_slice());
            report.objective = Some(Num(sol.residual_norm * sol.residual_norm));
            report.coefficients = Some(Coefficients::Vector(nums(sol.coefficients.as_slice())));
            report.unique = Some(!sol.rank_deficient);
            report.rank_deficient = Some(sol.rank_deficient);
        }
        Mode::TlsLine | Mode::TlsPlane => {
            if mode == Mode::TlsLine && data.cols() != 2 {
                return dim_err(format!("tls-line needs 2 columns, got {}", data.cols()));
            }
            let fit = fit_hyperplane_tls(&PointCloud::new(data.clone())?)?;
            report.coefficients = fit
                .explicit_coeffs
                .as_ref()
                .map(|c| Coefficients::Vector(nums(c.as_slice())));
            report.normal = Some(nums(fit.normal.as_slice()));
            report.centroid = Some(nums(fit.centroid.as_slice()));
            report.objective = Some(Num(fit.objective));
            report.singular_values = nums(fit.sigma.as_slice());
            report.unique = Some(fit.unique);
            report.expressible = Some(fit.expressible);
        }
        Mode::TlsSystem => {
            if request.rhs_cols != 1 {
                return dim_err("tls-system takes exactly one right-hand-side column; use tls-multi");
            }
            let (a, b) = split_rhs(data, 1, 1)?;
            let sol = solve_tls_system(&a, &b.column_vector(0))?;
            report.coefficients = Some(Coefficients::Vector(nums(sol.coefficients.as_slice())));
            report.objective = Some(Num(sol.tls_residual * sol.tls_residual));
            report.singular_values = nums(sol.sigma.as_slice());
            report.unique = Some(sol.unique);
        }
        Mode::TlsMulti => {
            let (a, b) = split_rhs(data, request.rhs_cols, 1)?;
            let sol = solve_tls_multi(&a, &b)?;
            report.coefficients = Some(Coefficients::from_matrix(&sol.x));
            report.objective = Some(Num(sol.residual_sq()));
            report.singular_values = nums(sol.sigma.as_slice());
            report.unique = Some(sol.unique);
        }
        Mode::TlsFixed => {
            let j = request.frozen_cols;
            let (lhs, b) = split_rhs(data, request.rhs_cols, j + 1)?;
            let m = lhs.rows();
            let a1 = lhs.block(0..m, 0..j);
            let a2 = lhs.block(0..m, j..lhs.cols());
            let sol = solve_tls_fixed(&a1, &a2, &b)?;
            report.coefficients = Some(Coefficients::from_matrix(&sol.x1.vstack(&sol.x2)?));
            report.objective = Some(Num(sol.minimized_value));
            report.singular_values = nums(sol.sigma.as_slice());
            report.unique = Some(sol.unique && sol.x1_unique);
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn req(mode: Mode) -> FitRequest {
        FitRequest::new(mode, "unused.csv")
    }

    #[test]
    fn mode_names_round_trip() {
        for m in Mode::ALL {
            assert_eq!(m.as_str().parse::<Mode>().unwrap(), m);
        }
        assert!("tls".parse::<Mode>().is_err());
    }

    #[test]
    fn example_two_exits_with_two() {
        let data = parse_csv_str("1,0,1\n0,0,1\n0,0,1").unwrap();
        let out = run_matrix(&req(Mode::TlsSystem), &data);
        assert_eq!(out.exit_code, EXIT_NO_SOLUTION);
        let err = out.report.error.as_ref().unwrap();
        assert_eq!(err.kind, "no_tls_solution");
        assert_eq!(out.report.singular_values.last(), Some(&Num(0.0)));
    }

    #[test]
    fn collinear_ols_is_exact() {
        let data = parse_csv_str("0,1\n1,3\n2,5\n3,7").unwrap();
        let out = run_matrix(&req(Mode::Ols), &data);
        assert_eq!(out.exit_code, EXIT_OK);
        assert_eq!(
            out.report.coefficients,
            Some(Coefficients::Vector(vec![Num(1.0), Num(2.0)]))
        );
        assert_eq!(out.report.objective, Some(Num(0.0)));
    }

    #[test]
    fn fixed_column_split_must_leave_free_columns() {
        let data = parse_csv_str("1,0,1\n1,1,2\n1,2,2\n1,3,4").unwrap();
        let mut r = req(Mode::TlsFixed);
        r.frozen_cols = 2;
        assert_eq!(run_matrix(&r, &data).exit_code, EXIT_INPUT);
        r.frozen_cols = 1;
        assert_eq!(run_matrix(&r, &data).exit_code, EXIT_OK);
    }

    #[test]
    fn line_mode_needs_two_columns() {
        let data = parse_csv_str("1,0,1\n1,1,2\n1,2,2\n1,3,4").unwrap();
        let out = run_matrix(&req(Mode::TlsLine), &data);
        assert_eq!(out.exit_code, EXIT_INPUT);
        assert_eq!(out.report.error.unwrap().kind, "dimension");
    }

    #[test]
    fn missing_file_is_input_error() {
        let out = run(&req(Mode::Ols));
        assert_eq!(out.exit_code, EXIT_INPUT);
        assert_eq!(out.report.error.unwrap().kind, "io");
    }
}
