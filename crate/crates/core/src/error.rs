use thiserror::Error;

use crate::linalg::Vector;

/// Everything that can go wrong in the solvers, the kernel or the CLI front end.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum FitError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("Jacobi SVD did not converge within {sweeps} sweeps")]
    Convergence { sweeps: usize },

    #[error("matrix is rank deficient for {method}; retry with the SVD method")]
    RankDeficiency { method: &'static str },

    #[error("all abscissae are equal; the regression line is vertical")]
    DegenerateAbscissa,

    #[error("empty data: {0}")]
    EmptyData(String),

    #[error("{}", no_solution_message(.null_vector, .sigma))]
    NoTlsSolution {
        /// Direction in the null space of the nearest rank-deficient system whose
        /// right-hand-side block vanishes.
        null_vector: Vector,
        /// Singular values of the augmented matrix, descending.
        sigma: Vector,
    },

    #[error("format error at line {line}{}: {detail}", col.map(|c| format!(", column {c}")).unwrap_or_default())]
    Format {
        line: usize,
        col: Option<usize>,
        detail: String,
    },

    #[error("i/o error: {0}")]
    Io(String),
}

fn no_solution_message(null_vector: &Vector, sigma: &Vector) -> String {
    format!(
        "no TLS solution exists: the right singular vector {:?} for the smallest singular value {:e} has a vanishing right-hand-side component",
        null_vector.as_slice(),
        sigma.as_slice().last().copied().unwrap_or(0.0)
    )
}

impl FitError {
    /// Stable machine-readable tag used in reports and by the C ABI.
    pub fn kind(&self) -> &'static str {
        match self {
            FitError::Dimension(_) => "dimension",
            FitError::NonFinite { .. } => "non_finite",
            FitError::Convergence { .. } => "convergence",
            FitError::RankDeficiency { .. } => "rank_deficiency",
            FitError::DegenerateAbscissa => "degenerate_abscissa",
            FitError::EmptyData(_) => "empty_data",
            FitError::NoTlsSolution { .. } => "no_tls_solution",
            FitError::Format { .. } => "format",
            FitError::Io(_) => "io",
        }
    }
}

pub type Result<T> = std::result::Result<T, FitError>;

pub(crate) fn dim_err<T>(msg: impl Into<String>) -> Result<T> {
    Err(FitError::Dimension(msg.into()))
}
