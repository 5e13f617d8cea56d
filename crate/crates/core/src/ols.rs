//! Ordinary least squares: vertical residuals only.

use crate::error::{dim_err, FitError, Result};
use crate::linalg::{householder_qr, jacobi_svd, pinv_apply, qr_solve, Matrix, Vector, RANK_TOL};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OlsMethod {
    NormalEquations,
    Qr,
    Svd,
    ClosedForm,
}

impl OlsMethod {
    fn name(self) -> &'static str {
        match self {
            OlsMethod::NormalEquations => "normal equations",
            OlsMethod::Qr => "QR",
            OlsMethod::Svd => "SVD",
            OlsMethod::ClosedForm => "closed form",
        }
    }
}

#[derive(Debug, Clone)]
pub struct OlsSolution {
    pub coefficients: Vector,
    /// `‖A·c − y‖₂`
    pub residual_norm: f64,
    pub method: OlsMethod,
    pub rank_deficient: bool,
}

/// Arithmetic mean, the constant that minimizes `Σ (xᵢ − c)²`.
pub fn mean_1d(x: &Vector) -> Result<f64> {
    if x.is_empty() {
        return Err(FitError::EmptyData("mean of an empty vector".into()));
    }
    Ok(x.iter().sum::<f64>() / x.len() as f64)
}

/// Least squares line `y = a + b·x`, returned as coefficients `(a, b)`.
pub fn simple_regression(x: &Vector, y: &Vector) -> Result<OlsSolution> {
    if x.len() != y.len() {
        return dim_err(format!("{} abscissae but {} ordinates", x.len(), y.len()));
    }
    if x.len() < 2 {
        return dim_err("simple regression needs at least two points");
    }
    let xs = x.as_slice();
    if xs.iter().all(|&v| v == xs[0]) {
        return Err(FitError::DegenerateAbscissa);
    }
    let xbar = mean_1d(x)?;
    let ybar = mean_1d(y)?;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (&xi, &yi) in xs.iter().zip(y.iter()) {
        sxy += (xbar - xi) * (ybar - yi);
        sxx += (xbar - xi) * (xbar - xi);
    }
    if sxx == 0.0 {
        return Err(FitError::DegenerateAbscissa);
    }
    let slope = sxy / sxx;
    let intercept = ybar - slope * xbar;
    let ssr: f64 = xs
        .iter()
        .zip(y.iter())
        .map(|(&xi, &yi)| (intercept + slope * xi - yi).powi(2))
        .sum();
    Ok(OlsSolution {
        coefficients: Vector::new(vec![intercept, slope])?,
        residual_norm: ssr.sqrt(),
        method: OlsMethod::ClosedForm,
        rank_deficient: false,
    })
}

/// Minimizes `‖A c − y‖₂` with the requested method.
///
/// `NormalEquations` and `Qr` reject rank-deficient `A` with
/// [`FitError::RankDeficiency`]; `Svd` returns the minimum-norm minimizer and
/// flags `rank_deficient`. `ClosedForm` expects `A = (e | x)` and defers to
/// [`simple_regression`].
pub fn solve_ols(a: &Matrix, y: &Vector, method: OlsMethod) -> Result<OlsSolution> {
    let (m, n) = a.shape();
    if m < n {
        return dim_err(format!("least squares needs rows >= cols, got {m}x{n}"));
    }
    if y.len() != m {
        return dim_err(format!("right-hand side has length {}, expected {m}", y.len()));
    }
    let (coefficients, rank_deficient) = match method {
        OlsMethod::NormalEquations => (normal_equations(a, y)?, false),
        OlsMethod::Qr => {
            let qr = householder_qr(a)?;
            let r = &qr.r_upper;
            let dmax = (0..n).fold(0.0_f64, |acc, k| acc.max(r.get(k, k).abs()));
            if n > 0 && (0..n).any(|k| r.get(k, k).abs() <= RANK_TOL * dmax || dmax == 0.0) {
                return Err(FitError::RankDeficiency { method: method.name() });
            }
            let c = qr_solve(&qr, y).ok_or(FitError::RankDeficiency { method: method.name() })?;
            (Vector::new(c)?, false)
        }
        OlsMethod::Svd => {
            let svd = jacobi_svd(a)?;
            (pinv_apply(&svd, y)?, svd.rank() < n)
        }
        OlsMethod::ClosedForm => {
            let ones = a.column(0).iter().all(|&v| v == 1.0);
            if n != 2 || !ones {
                return dim_err("closed form expects a design matrix (e | x)");
            }
            return simple_regression(&a.column_vector(1), y);
        }
    };
    let residual_norm = a.mul_vec(&coefficients)?.sub(y)?.norm();
    Ok(OlsSolution {
        coefficients,
        residual_norm,
        method,
        rank_deficient,
    })
}

/// `‖A c − y‖₂²`
pub fn residual_sum_of_squares(a: &Matrix, y: &Vector, c: &Vector) -> Result<f64> {
    let r = a.mul_vec(c)?.sub(y)?;
    Ok(r.dot(&r))
}

fn normal_equations(a: &Matrix, y: &Vector) -> Result<Vector> {
    let n = a.cols();
    let at = a.transpose();
    let g = at.mul(a)?;
    let h = a.tr_mul_vec(y)?;
    let dmax = (0..n).fold(0.0_f64, |acc, k| acc.max(g.get(k, k)));
    let pivot_floor = f64::EPSILON * n as f64 * dmax;
    let deficient = || FitError::RankDeficiency {
        method: OlsMethod::NormalEquations.name(),
    };

    // Cholesky G = L Lᵀ, lower triangle stored in l
    let mut l = vec![0.0; n * n];
    for j in 0..n {
        let mut d = g.get(j, j);
        for k in 0..j {
            d -= l[j * n + k] * l[j * n + k];
        }
        if d <= pivot_floor || d <= 0.0 {
            return Err(deficient());
        }
        let d = d.sqrt();
        l[j * n + j] = d;
        for i in j + 1..n {
            let mut s = g.get(i, j);
            for k in 0..j {
                s -= l[i * n + k] * l[j * n + k];
            }
            l[i * n + j] = s / d;
        }
    }
    let mut z = h.into_vec();
    for i in 0..n {
        for k in 0..i {
            z[i] -= l[i * n + k] * z[k];
        }
        z[i] /= l[i * n + i];
    }
    for i in (0..n).rev() {
        for k in i + 1..n {
            z[i] -= l[k * n + i] * z[k];
        }
        z[i] /= l[i * n + i];
    }
    Vector::new(z)
}
